use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::diagnostics::{
    certify_boundedness, condition_global, rho_exponent, sobolev_norm, DiagnosticsError,
    NormReport, Verdict,
};
use crate::solver::{run, Abort, SolverConfig, Trajectory};
use crate::spectral::snapshot::write_snapshot;
use crate::spectral::{Grid, SpectralField};

use super::{initial_field, HarnessError, RunConfig};

/// Summary of one run as written to `run.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub config: RunConfig,
    pub verdict: Verdict,
    pub report_path: PathBuf,
    pub snapshot_path: PathBuf,
    /// Seconds spent integrating.
    pub wall_time: f64,
    pub condition_11: bool,
    /// Present exactly when `condition_11` holds.
    pub rho: Option<f64>,
    pub steps: usize,
    pub aborted: Option<Abort>,
    pub final_l2: f64,
}

impl RunRecord {
    /// Human-readable verdict line.
    pub fn summary(&self) -> String {
        let v = &self.verdict;
        let mut s = format!(
            "bounded={} sup={:e} at t={:e} tail_slope={:e} budgets_settling={} condition_11={}",
            v.bounded,
            v.sup_norm,
            v.sup_time,
            v.growth_rate_tail,
            v.budgets_settling,
            self.condition_11
        );
        if let Some(rho) = self.rho {
            s.push_str(&format!(" rho={rho:e}"));
        }
        if let Some(reason) = &v.reason {
            s.push_str(&format!(" ({reason})"));
        }
        s
    }
}

/// Trajectory of a run plus its classification.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub verdict: Verdict,
    pub wall_time: f64,
}

/// Verdict for a report. Reports too short to classify become unbounded
/// verdicts with the reason attached instead of an error.
pub fn verdict_for(report: &NormReport, s: f64) -> Verdict {
    match certify_boundedness(report, s) {
        Ok(v) => v,
        Err(e) => {
            let (sup_norm, sup_time) = report
                .rows
                .iter()
                .map(|r| (r.hs * r.hs + r.cumdiss1 + r.cumdiss2, r.t))
                .fold((0.0, 0.0), |best, x| if x.0 > best.0 { x } else { best });
            let reason = match e {
                DiagnosticsError::TooFewRows(n) => format!("not classified: {n} rows"),
                other => other.to_string(),
            };
            Verdict {
                bounded: false,
                sup_norm,
                sup_time,
                growth_rate_tail: f64::NAN,
                budgets_settling: false,
                reason: Some(reason),
            }
        }
    }
}

/// Integrates `theta0` under `solver` and classifies the result.
pub fn execute(theta0: &SpectralField, solver: &SolverConfig) -> Result<RunOutcome, HarnessError> {
    let start = Instant::now();
    let trajectory = run(theta0, solver)?;
    let wall_time = start.elapsed().as_secs_f64();
    let verdict = verdict_for(&trajectory.report, solver.sobolev_s);
    Ok(RunOutcome {
        trajectory,
        verdict,
        wall_time,
    })
}

pub(crate) fn condition_and_rho(alpha: f64, beta: f64) -> (bool, Option<f64>) {
    let cond = condition_global(alpha, beta).unwrap_or(false);
    (
        cond,
        if cond {
            rho_exponent(alpha, beta).ok()
        } else {
            None
        },
    )
}

/// Writes the report CSV, the final snapshot and the run record under
/// `out` with file names starting with `prefix`.
pub(crate) fn persist(
    out: &Path,
    prefix: &str,
    config: &RunConfig,
    outcome: &RunOutcome,
) -> Result<RunRecord, HarnessError> {
    fs::create_dir_all(out)?;
    let report_path = out.join(format!("{prefix}report.csv"));
    fs::write(&report_path, outcome.trajectory.report.to_csv())?;
    let snapshot_path = out.join(format!("{prefix}final.aqgf"));
    write_snapshot(
        BufWriter::new(File::create(&snapshot_path)?),
        &outcome.trajectory.final_state.to_physical(),
    )?;

    let p = &config.solver.params;
    let (condition_11, rho) = condition_and_rho(p.alpha, p.beta);
    let record = RunRecord {
        config: config.clone(),
        verdict: outcome.verdict.clone(),
        report_path,
        snapshot_path,
        wall_time: outcome.wall_time,
        condition_11,
        rho,
        steps: outcome.trajectory.steps,
        aborted: outcome.trajectory.aborted.clone(),
        final_l2: sobolev_norm(&outcome.trajectory.final_state, 0.0, false),
    };
    fs::write(
        out.join(format!("{prefix}run.json")),
        serde_json::to_string_pretty(&record)?,
    )?;
    Ok(record)
}

pub(crate) fn grid_of(config: &RunConfig) -> Result<std::sync::Arc<Grid>, HarnessError> {
    Ok(Grid::new(config.n1, config.n2, config.l1, config.l2)?)
}

/// Loads `config_path`, runs it and writes `report.csv`, `final.aqgf` and
/// `run.json` into `out`. A blow-up is a completed run with a flagged
/// verdict, not an error.
pub fn cmd_run(
    config_path: &Path,
    out: &Path,
    seed: Option<u64>,
) -> Result<RunRecord, HarnessError> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(dir) = config_path.parent() {
        config.resolve_paths(dir);
    }
    if let Some(seed) = seed {
        config.solver.seed = seed;
    }
    let grid = grid_of(&config)?;
    let theta0 = initial_field(&grid, &config.init, config.solver.seed)?;
    let outcome = execute(&theta0, &config.solver)?;
    persist(out, "", &config, &outcome)
}
