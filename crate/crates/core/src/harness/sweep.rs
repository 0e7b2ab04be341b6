use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::params::AnisotropyParams;
use crate::spectral::SpectralField;

use super::run::{condition_and_rho, execute, grid_of};
use super::{initial_field, HarnessError, SweepSpec};

pub const SWEEP_CSV_HEADER: &str =
    "alpha,beta,condition_11,rho_or_blank,bounded,sup_hs,tail_slope,aborted";

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub condition_11: bool,
    pub rho: Option<f64>,
    pub bounded: bool,
    /// Largest sampled `‖θ‖_{Hˢ}`.
    pub sup_hs: Option<f64>,
    pub tail_slope: Option<f64>,
    pub aborted: bool,
    /// Set when the point could not be run at all.
    pub error: Option<String>,
}

fn run_point(sweep: &SweepSpec, theta0: &SpectralField, alpha: f64, beta: f64) -> SweepRow {
    let (condition_11, rho) = condition_and_rho(alpha, beta);
    let base = &sweep.base.solver.params;
    let mut row = SweepRow {
        alpha,
        beta,
        condition_11,
        rho,
        bounded: false,
        sup_hs: None,
        tail_slope: None,
        aborted: true,
        error: None,
    };
    let params = if base.mu == 0.0 && base.nu == 0.0 {
        AnisotropyParams::inviscid(alpha, beta)
    } else {
        AnisotropyParams::new(alpha, beta, base.mu, base.nu)
    };
    let mut solver = sweep.base.solver.clone();
    match params {
        Ok(p) => solver.params = p,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    }
    match execute(theta0, &solver) {
        Ok(out) => {
            let report = &out.trajectory.report;
            row.bounded = out.verdict.bounded;
            row.sup_hs = report.rows.iter().map(|r| r.hs).reduce(f64::max);
            row.tail_slope = Some(out.verdict.growth_rate_tail).filter(|v| v.is_finite());
            row.aborted = out.trajectory.aborted.is_some();
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs every `(alpha, beta)` point on a pool of `sweep.parallelism`
/// threads. Rows come back in row-major order (alpha outer) whatever the
/// execution order.
pub fn run_sweep(sweep: &SweepSpec) -> Result<Vec<SweepRow>, HarnessError> {
    let grid = grid_of(&sweep.base)?;
    let theta0 = initial_field(&grid, &sweep.base.init, sweep.base.solver.seed)?;
    let points: Vec<(f64, f64)> = sweep
        .alpha_grid
        .iter()
        .flat_map(|&a| sweep.beta_grid.iter().map(move |&b| (a, b)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep.parallelism)
        .build()
        .map_err(|e| HarnessError::Invalid(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        points
            .par_iter()
            .map(|&(a, b)| run_point(sweep, &theta0, a, b))
            .collect()
    }))
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.alpha,
            r.beta,
            r.condition_11,
            opt(r.rho),
            r.bounded,
            opt(r.sup_hs),
            opt(r.tail_slope),
            r.aborted
        );
    }
    out
}

/// Loads a sweep file, runs it and writes `sweep.csv` into `out`.
pub fn cmd_sweep(
    config_path: &Path,
    out: &Path,
    seed: Option<u64>,
) -> Result<(Vec<SweepRow>, PathBuf), HarnessError> {
    let mut sweep = SweepSpec::load(config_path)?;
    if let Some(dir) = config_path.parent() {
        sweep.base.resolve_paths(dir);
    }
    if let Some(seed) = seed {
        sweep.base.solver.seed = seed;
    }
    let rows = run_sweep(&sweep)?;
    fs::create_dir_all(out)?;
    let path = out.join("sweep.csv");
    fs::write(&path, sweep_csv(&rows))?;
    Ok((rows, path))
}
