use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::diagnostics::sobolev_norm;
use crate::solver::{DtPolicy, Snapshot};
use crate::spectral::snapshot::write_snapshot;

use super::run::{execute, grid_of, persist};
use super::{initial_field, ConfigError, HarnessError, InitSpec, RunConfig, RunRecord};

/// Bound on the overlap discrepancy for identical stepping.
pub const RESTART_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct RestartOutcome {
    pub theta: RunRecord,
    pub gamma: RunRecord,
    pub t0_requested: f64,
    /// Sample time the restart actually starts from.
    pub t0: f64,
    pub warning: Option<String>,
    /// `max ‖θ(t) − γ(t − t0)‖_{L²}` over matched samples.
    pub discrepancy: f64,
    pub compared: usize,
    pub comparison_path: PathBuf,
}

impl RestartOutcome {
    pub fn passed(&self) -> bool {
        self.discrepancy <= RESTART_TOL
    }
}

/// Runs `θ` from the configured data, restarts `γ` from `θ(t0)` with the
/// same fixed step and compares both on every shared step. `t0` is snapped
/// to the nearest diagnostic sample.
pub fn cmd_restart(
    config_path: &Path,
    out: &Path,
    seed: Option<u64>,
) -> Result<RestartOutcome, HarnessError> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(dir) = config_path.parent() {
        config.resolve_paths(dir);
    }
    if let Some(seed) = seed {
        config.solver.seed = seed;
    }
    restart_experiment(&config, out)
}

pub(crate) fn restart_experiment(
    config: &RunConfig,
    out: &Path,
) -> Result<RestartOutcome, HarnessError> {
    let t0_requested = config
        .restart_t0
        .ok_or_else(|| ConfigError::Invalid("restart needs `restart_t0`".into()))?;
    if !matches!(config.solver.dt_policy, DtPolicy::Fixed(_)) {
        return Err(ConfigError::Invalid(
            "restart needs a fixed `dt` for identical stepping".into(),
        )
        .into());
    }
    let grid = grid_of(config)?;
    let theta0 = initial_field(&grid, &config.init, config.solver.seed)?;

    let mut first = config.clone();
    first.solver.snapshot_every = Some(1);
    let theta_run = execute(&theta0, &first.solver)?;
    let snaps = theta_run
        .trajectory
        .snapshots
        .as_deref()
        .unwrap_or_default();
    let start = snaps
        .iter()
        .min_by(|a, b| {
            (a.t - t0_requested)
                .abs()
                .total_cmp(&(b.t - t0_requested).abs())
        })
        .expect("the initial state is always sampled");
    let t0 = start.t;
    let warning = ((t0 - t0_requested).abs() > 1e-12 * t0_requested.abs().max(1.0)).then(|| {
        format!(
            "t0 = {t0_requested} is not a sample time; restarting from the nearest sample t = {t0}"
        )
    });

    fs::create_dir_all(out)?;
    let start_path = out.join("theta_t0.aqgf");
    write_snapshot(
        BufWriter::new(File::create(&start_path)?),
        &start.field.to_physical(),
    )?;
    let mut second = config.clone();
    second.solver.snapshot_every = Some(1);
    second.solver.t_end = config.solver.t_end - t0;
    second.init = InitSpec::File { path: start_path };
    second.restart_t0 = None;
    let gamma_run = execute(&start.field, &second.solver)?;

    let by_step: HashMap<usize, &Snapshot> = snaps.iter().map(|s| (s.step, s)).collect();
    let mut csv = String::from("t,theta_l2,gamma_l2,discrepancy\n");
    let mut discrepancy = 0.0f64;
    let mut compared = 0;
    for g in gamma_run
        .trajectory
        .snapshots
        .as_deref()
        .unwrap_or_default()
    {
        let Some(th) = by_step.get(&(start.step + g.step)) else {
            continue;
        };
        let diff = th.field.axpy(-1.0, &g.field)?;
        let d = sobolev_norm(&diff, 0.0, false);
        discrepancy = discrepancy.max(if d.is_nan() { f64::INFINITY } else { d });
        compared += 1;
        let _ = writeln!(
            csv,
            "{:e},{:e},{:e},{:e}",
            th.t,
            sobolev_norm(&th.field, 0.0, false),
            sobolev_norm(&g.field, 0.0, false),
            d
        );
    }
    let comparison_path = out.join("restart_comparison.csv");
    fs::write(&comparison_path, csv)?;

    let theta = persist(out, "theta_", config, &theta_run)?;
    let gamma = persist(out, "gamma_", &second, &gamma_run)?;
    Ok(RestartOutcome {
        theta,
        gamma,
        t0_requested,
        t0,
        warning,
        discrepancy,
        compared,
        comparison_path,
    })
}
