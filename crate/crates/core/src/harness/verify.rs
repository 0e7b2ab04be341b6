use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diagnostics::sobolev_norm;
use crate::oracle::{
    check_interpolation, check_ln_bound, check_log_sobolev, estimate_riesz_lp_constant,
    sample_field, FieldSampler, Normalization, OracleReport, INTERPOLATION_TOL, LN_BOUND_TOL,
    STABILITY_GROWTH,
};
use crate::params::AnisotropyParams;
use crate::solver::{run, DtPolicy, SolverConfig};
use crate::spectral::{advection_term, riesz_velocity, Axis, Grid, PhysicalField, SpectralField};

use super::HarnessError;

/// Draws per interpolation form.
const LEMMA1_DRAWS: usize = 1000;
/// Samples of the Riesz ratio at `p = 2`, and at each larger `p`.
const LEMMA2_SAMPLES_L2: usize = 1000;
const LEMMA2_SAMPLES_LP: usize = 400;
/// Samples of the log-Sobolev ratio before doubling.
const LEMMA3_SAMPLES: usize = 200;
const LEMMA3_SIGMA: f64 = 1.5;
/// Allowed relative change of the log-Sobolev constant when the band doubles.
const LEMMA3_BAND_TOL: f64 = 0.2;
const LEMMA6_ALPHAS: [f64; 4] = [0.1, 0.5, 1.0, 2.0];
const LEMMA6_POINTS: usize = 200_001;
/// Fields per solver identity check.
const SOLVER_FIELDS: u64 = 20;

const DECAY_TOL: f64 = 1e-9;
const DIVERGENCE_TOL: f64 = 1e-12;
const SKEW_TOL: f64 = 1e-10;
const ROUND_TRIP_TOL: f64 = 1e-12;
const INVISCID_TOL: f64 = 1e-8;
const ENERGY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifySuite {
    Lemma1,
    Lemma2,
    Lemma3,
    Lemma6,
    Solver,
    All,
}

impl VerifySuite {
    pub fn name(self) -> &'static str {
        match self {
            Self::Lemma1 => "lemma1",
            Self::Lemma2 => "lemma2",
            Self::Lemma3 => "lemma3",
            Self::Lemma6 => "lemma6",
            Self::Solver => "solver",
            Self::All => "all",
        }
    }
}

impl FromStr for VerifySuite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "lemma1" => Self::Lemma1,
            "lemma2" => Self::Lemma2,
            "lemma3" => Self::Lemma3,
            "lemma6" => Self::Lemma6,
            "solver" => Self::Solver,
            "all" => Self::All,
            other => {
                return Err(HarnessError::Invalid(format!(
                    "unknown suite `{other}` (lemma1, lemma2, lemma3, lemma6, solver, all)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub reports: Vec<OracleReport>,
    /// Remarks for the log that do not affect the outcome.
    pub notes: Vec<String>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(OracleReport::passed)
    }

    /// Failing report with the most violations.
    pub fn worst(&self) -> Option<&OracleReport> {
        self.reports
            .iter()
            .filter(|r| !r.passed())
            .max_by_key(|r| r.violations)
    }
}

fn report(
    lemma: &str,
    params: String,
    samples: usize,
    max_ratio: f64,
    violations: usize,
    seed: u64,
) -> OracleReport {
    OracleReport {
        lemma: lemma.into(),
        params,
        samples,
        max_ratio,
        violations,
        worst_case_seed: seed,
    }
}

fn oracle(e: crate::oracle::OracleError) -> HarnessError {
    HarnessError::Invalid(e.to_string())
}

/// Largest value and the seed that produced it; NaN wins.
fn worst_of(values: &[(f64, u64)]) -> (f64, u64) {
    values
        .iter()
        .copied()
        .fold((f64::NEG_INFINITY, 0), |best, (v, s)| {
            if v.is_nan() || best.0.is_nan() {
                if best.0.is_nan() {
                    best
                } else {
                    (v, s)
                }
            } else if v > best.0 {
                (v, s)
            } else {
                best
            }
        })
}

fn lemma1(seed: u64) -> Result<Vec<OracleReport>, HarnessError> {
    let grid = Grid::square(32)?;
    let mut out = Vec::new();
    for (form, homogeneous) in [("ing1", false), ("ing2", true)] {
        let draws: Vec<(f64, u64)> = (0..LEMMA1_DRAWS as u64)
            .into_par_iter()
            .map(|i| {
                let s_i = seed.wrapping_add(i);
                let mut rng = ChaCha8Rng::seed_from_u64(s_i);
                let kmax = rng.random_range(1..=10);
                let sampler = FieldSampler::new(grid.clone(), kmax, s_i, Normalization::UnitL2)
                    .expect("band fits the grid");
                let f = sample_field(&sampler);
                let axis = if rng.random_bool(0.5) {
                    Axis::X1
                } else {
                    Axis::X2
                };
                let s = rng.random_range(0.0..3.0);
                let s1 = rng.random_range(0.0..3.0);
                let s2 = rng.random_range(0.0..3.0);
                let z = rng.random_range(0.0..=1.0);
                let r =
                    check_interpolation(&f, axis, s, s1, s2, z, homogeneous).unwrap_or(f64::NAN);
                (r, s_i)
            })
            .collect();
        let violations = draws
            .iter()
            .filter(|(r, _)| !(r.is_finite() && *r <= 1.0 + INTERPOLATION_TOL))
            .count();
        let (max, worst) = worst_of(&draws);
        out.push(report(
            "lemma1",
            format!("form={form};n=32;kmax<=10"),
            LEMMA1_DRAWS,
            max,
            violations,
            worst,
        ));
    }
    Ok(out)
}

fn lemma2(seed: u64) -> Result<Vec<OracleReport>, HarnessError> {
    let grid = Grid::square(32)?;
    let sampler =
        FieldSampler::new(grid.clone(), 10, seed, Normalization::UnitL2).map_err(oracle)?;
    let mut out =
        vec![estimate_riesz_lp_constant(2.0, &sampler, LEMMA2_SAMPLES_L2).map_err(oracle)?];
    for p in [4.0, 8.0] {
        out.push(estimate_riesz_lp_constant(p, &sampler, LEMMA2_SAMPLES_LP).map_err(oracle)?);
    }
    out.push(divergence_check(&grid, seed));
    Ok(out)
}

/// Largest `|ξ·û|` over all modes relative to the largest coefficient of θ.
fn divergence_defect(theta: &SpectralField) -> f64 {
    let g = theta.grid();
    let (u1, u2) = riesz_velocity(theta);
    let mut worst = 0.0f64;
    for i1 in 0..g.n1() {
        for i2 in 0..g.n2() {
            let d = g.k1()[i1] * u1.coeff(i1, i2) + g.k2()[i2] * u2.coeff(i1, i2);
            worst = worst.max(d.norm());
        }
    }
    worst / theta.max_coeff().max(f64::MIN_POSITIVE)
}

fn divergence_check(grid: &Arc<Grid>, seed: u64) -> OracleReport {
    let vals: Vec<(f64, u64)> = (0..SOLVER_FIELDS)
        .map(|i| {
            let s = seed.wrapping_add(i);
            let sampler =
                FieldSampler::new(grid.clone(), 10, s, Normalization::UnitL2).expect("band fits");
            (divergence_defect(&sample_field(&sampler)), s)
        })
        .collect();
    let violations = vals.iter().filter(|(v, _)| !(*v <= DIVERGENCE_TOL)).count();
    let (max, worst) = worst_of(&vals);
    report(
        "lemma2",
        "check=divergence;n=32".into(),
        vals.len(),
        max,
        violations,
        worst,
    )
}

fn log_sobolev_ratios(
    grid: &Arc<Grid>,
    kmax: usize,
    seed: u64,
    n: usize,
    amp: f64,
) -> Result<Vec<(f64, u64)>, HarnessError> {
    let sampler =
        FieldSampler::new(grid.clone(), kmax, seed, Normalization::UnitL2).map_err(oracle)?;
    Ok((0..n as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let f = sample_field(&sampler.with_seed(s)).scaled(amp);
            (
                check_log_sobolev(&f, LEMMA3_SIGMA)
                    .map(|r| r.ratio)
                    .unwrap_or(f64::NAN),
                s,
            )
        })
        .collect())
}

fn lemma3(seed: u64) -> Result<Vec<OracleReport>, HarnessError> {
    let grid = Grid::square(64)?;
    let (kmax, n) = (8, LEMMA3_SAMPLES);
    let nonfinite = |v: &[(f64, u64)]| v.iter().filter(|(r, _)| !r.is_finite()).count();

    // sample doubling
    let all = log_sobolev_ratios(&grid, kmax, seed, 2 * n, 1.0)?;
    let (c_all, worst) = worst_of(&all);
    let (c_half, _) = worst_of(&all[..n]);
    let unstable = usize::from(!(c_all <= STABILITY_GROWTH * c_half));
    let mut out = vec![report(
        "lemma3",
        format!(
            "check=samples;sigma={LEMMA3_SIGMA};kmax={kmax};growth={:e}",
            c_all / c_half
        ),
        2 * n,
        c_all,
        nonfinite(&all) + unstable,
        worst,
    )];

    // band doubling
    let wide = log_sobolev_ratios(&grid, 2 * kmax, seed, 2 * n, 1.0)?;
    let (c_wide, worst_wide) = worst_of(&wide);
    let change = c_wide / c_all - 1.0;
    out.push(report(
        "lemma3",
        format!(
            "check=band;sigma={LEMMA3_SIGMA};kmax={}->{};change={change:e}",
            kmax,
            2 * kmax
        ),
        2 * n,
        c_wide,
        nonfinite(&wide) + usize::from(!(change.abs() <= LEMMA3_BAND_TOL)),
        worst_wide,
    ));

    // amplitude scaling: the ratio may not drop by more than the factor
    let scaled = log_sobolev_ratios(&grid, kmax, seed, n, 10.0)?;
    let drops: Vec<(f64, u64)> = all[..n]
        .iter()
        .zip(&scaled)
        .map(|((r1, s), (r10, _))| (r1 / r10, *s))
        .collect();
    let (max_drop, worst_drop) = worst_of(&drops);
    out.push(report(
        "lemma3",
        format!("check=amplitude;sigma={LEMMA3_SIGMA};factor=10"),
        n,
        max_drop,
        nonfinite(&scaled) + drops.iter().filter(|(d, _)| !(*d <= 10.0)).count(),
        worst_drop,
    ));
    Ok(out)
}

fn lemma6() -> Result<Vec<OracleReport>, HarnessError> {
    LEMMA6_ALPHAS
        .iter()
        .map(|&alpha| {
            let gap = check_ln_bound(alpha, LEMMA6_POINTS).map_err(oracle)?;
            Ok(report(
                "lemma6",
                format!("alpha={alpha};x=[1,1e12]"),
                LEMMA6_POINTS,
                gap,
                usize::from(!(gap <= LN_BOUND_TOL)),
                0,
            ))
        })
        .collect()
}

fn solver_report(check: &str, samples: usize, measured: f64, tol: f64, seed: u64) -> OracleReport {
    report(
        "solver",
        format!("check={check};tol={tol:e}"),
        samples,
        measured,
        usize::from(!(measured <= tol)),
        seed,
    )
}

fn random_field(grid: &Arc<Grid>, kmax: usize, seed: u64, norm: Normalization) -> SpectralField {
    sample_field(&FieldSampler::new(grid.clone(), kmax, seed, norm).expect("band fits the grid"))
}

fn solver_suite(seed: u64) -> Result<Vec<OracleReport>, HarnessError> {
    let mut out = Vec::new();
    let g32 = Grid::square(32)?;

    // single-mode decay against e^{-t} cos x₁
    let theta = PhysicalField::from_fn(g32.clone(), |x1, _| x1.cos()).to_spectral();
    let params = AnisotropyParams::new(0.5, 0.5, 1.0, 1.0).expect("valid");
    let traj = run(
        &theta,
        &SolverConfig::new(params, 1.0, DtPolicy::Fixed(1e-3)),
    )?;
    let got = traj.final_state.to_physical();
    let decay = (-1.0f64).exp();
    let err = got
        .values()
        .iter()
        .zip(PhysicalField::from_fn(g32.clone(), |x1, _| decay * x1.cos()).values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    out.push(solver_report("decay", 1, err, DECAY_TOL, 0));

    let fields: Vec<(SpectralField, u64)> = (0..SOLVER_FIELDS)
        .map(|i| {
            let s = seed.wrapping_add(i);
            (random_field(&g32, 10, s, Normalization::UnitL2), s)
        })
        .collect();
    let worst = |f: &dyn Fn(&SpectralField) -> f64| {
        worst_of(&fields.iter().map(|(th, s)| (f(th), *s)).collect::<Vec<_>>())
    };

    let (div, s) = worst(&divergence_defect);
    out.push(solver_report(
        "divergence",
        fields.len(),
        div,
        DIVERGENCE_TOL,
        s,
    ));

    let (skew, s) = worst(&|th: &SpectralField| {
        let tp = th.to_physical();
        let ap = advection_term(th).to_physical();
        let ip: f64 = tp
            .values()
            .iter()
            .zip(ap.values())
            .map(|(a, b)| a * b)
            .sum();
        let na: f64 = tp.values().iter().map(|v| v * v).sum::<f64>().sqrt();
        let nb: f64 = ap.values().iter().map(|v| v * v).sum::<f64>().sqrt();
        if na * nb == 0.0 {
            0.0
        } else {
            ip.abs() / (na * nb)
        }
    });
    out.push(solver_report("skew", fields.len(), skew, SKEW_TOL, s));

    let (rt, s) = worst(&|th: &SpectralField| {
        let p = th.to_physical();
        let back = p.to_spectral().to_physical();
        let scale = p.max_abs().max(f64::MIN_POSITIVE);
        p.values()
            .iter()
            .zip(back.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / scale
    });
    out.push(solver_report(
        "round_trip",
        fields.len(),
        rt,
        ROUND_TRIP_TOL,
        s,
    ));

    // inviscid L² conservation
    let th0 = random_field(&g32, 4, seed, Normalization::UnitH2);
    let config = SolverConfig::new(
        AnisotropyParams::inviscid(0.5, 0.5).expect("valid"),
        1.0,
        DtPolicy::Fixed(1e-3),
    );
    let traj = run(&th0, &config)?;
    let (e0, e1) = (
        sobolev_norm(&th0, 0.0, false),
        sobolev_norm(&traj.final_state, 0.0, false),
    );
    out.push(solver_report(
        "inviscid_l2",
        1,
        (e1 - e0).abs() / e0,
        INVISCID_TOL,
        seed,
    ));

    // energy identity with the stage budgets
    let params = AnisotropyParams::new(0.75, 0.75, 1.0, 1.0).expect("valid");
    let mut config = SolverConfig::new(params, 0.5, DtPolicy::Fixed(1e-3));
    config.sobolev_s = 0.0;
    config.diag_stride = 50;
    let traj = run(&th0, &config)?;
    let last = traj.report.last().expect("rows recorded");
    let first = &traj.report.rows[0];
    let half_sq = |v: f64| 0.5 * v * v;
    let defect = half_sq(last.hs) - half_sq(first.hs) + last.cumdiss1 + last.cumdiss2;
    out.push(solver_report(
        "energy",
        1,
        defect.abs() / half_sq(first.hs),
        ENERGY_TOL,
        seed,
    ));
    Ok(out)
}

/// Runs one suite with base seed `seed`.
pub fn run_suite(suite: VerifySuite, seed: u64) -> Result<VerifyOutcome, HarnessError> {
    let mut notes = Vec::new();
    let reports = match suite {
        VerifySuite::Lemma1 => lemma1(seed)?,
        VerifySuite::Lemma2 => lemma2(seed)?,
        VerifySuite::Lemma3 => lemma3(seed)?,
        VerifySuite::Lemma6 => lemma6()?,
        VerifySuite::Solver => solver_suite(seed)?,
        VerifySuite::All => {
            let mut all = Vec::new();
            for s in [
                VerifySuite::Lemma1,
                VerifySuite::Lemma2,
                VerifySuite::Lemma3,
                VerifySuite::Lemma6,
                VerifySuite::Solver,
            ] {
                let o = run_suite(s, seed)?;
                all.extend(o.reports);
                notes.extend(o.notes);
            }
            return Ok(VerifyOutcome {
                reports: all,
                notes,
            });
        }
    };
    if suite == VerifySuite::Lemma1 {
        notes.push(
            "the homogeneous interpolation form is checked with the same outer index Ḣˢ on both \
             sides; the printed variant with Ḣ^{s1}, Ḣ^{s2} on the right is not tested"
                .into(),
        );
    }
    Ok(VerifyOutcome { reports, notes })
}

/// Runs `suite` and writes `oracle_<suite>.csv` into `out`.
pub fn cmd_verify(
    suite: VerifySuite,
    out: &Path,
    seed: Option<u64>,
) -> Result<(VerifyOutcome, PathBuf), HarnessError> {
    let outcome = run_suite(suite, seed.unwrap_or(0))?;
    fs::create_dir_all(out)?;
    let path = out.join(format!("oracle_{}.csv", suite.name()));
    fs::write(&path, OracleReport::csv(&outcome.reports))?;
    Ok((outcome, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [
            VerifySuite::Lemma1,
            VerifySuite::Lemma2,
            VerifySuite::Lemma3,
            VerifySuite::Lemma6,
            VerifySuite::Solver,
            VerifySuite::All,
        ] {
            assert_eq!(s.name().parse::<VerifySuite>().unwrap(), s);
        }
        assert!("lemma4".parse::<VerifySuite>().is_err());
    }

    #[test]
    fn worst_prefers_nan_then_max() {
        assert_eq!(worst_of(&[(1.0, 3), (2.0, 4), (0.5, 5)]), (2.0, 4));
        assert!(worst_of(&[(1.0, 3), (f64::NAN, 4), (5.0, 5)]).0.is_nan());
    }

    #[test]
    fn lemma6_passes() {
        let o = run_suite(VerifySuite::Lemma6, 0).unwrap();
        assert_eq!(o.reports.len(), 4);
        assert!(o.passed(), "{:?}", o.reports);
        assert!(o.reports.iter().all(|r| r.max_ratio <= 1e-12));
    }

    #[test]
    fn lemma1_passes_with_note() {
        let o = run_suite(VerifySuite::Lemma1, 11).unwrap();
        assert_eq!(o.reports.len(), 2);
        assert!(o.passed(), "{:?}", o.reports);
        assert_eq!(o.notes.len(), 1);
    }
}
