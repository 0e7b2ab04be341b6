//! Experiment orchestration behind the `aqg` command line: single runs,
//! `(α, β)` sweeps, verification suites and the restart experiment.
//!
//! Every command writes its artifacts into an output directory and returns
//! a summary value; printing and exit codes are left to the caller.

mod config;
mod init;
mod restart;
mod run;
mod sweep;
mod verify;

use thiserror::Error;

pub use config::{
    default_sweep_axis, ConfigError, InitSpec, RunConfig, SweepSpec, DEFAULT_DT,
    DEFAULT_ROUGH_REGULARITY,
};
pub use init::{initial_field, rough_field};
pub use restart::{cmd_restart, RestartOutcome, RESTART_TOL};
pub use run::{cmd_run, execute, verdict_for, RunOutcome, RunRecord};
pub use sweep::{cmd_sweep, run_sweep, sweep_csv, SweepRow, SWEEP_CSV_HEADER};
pub use verify::{cmd_verify, run_suite, VerifyOutcome, VerifySuite};

/// Process exit codes of the command-line contract.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
    #[error(transparent)]
    Solver(#[from] crate::solver::SolverError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Configuration and usage problems map to 2, runtime failures to 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Invalid(_) => exit::USAGE,
            _ => exit::VERIFICATION_FAILED,
        }
    }
}
