use serde::Serialize;

use crate::diagnostics::{sobolev_norm, DiagnosticsConfig, NormReport, ReportBuilder};
use crate::spectral::{riesz_velocity, SpectralField};

use super::step::{adapt_dt, Stepper};
use super::{BudgetQuadrature, DtPolicy, SolverConfig, SolverError, BLOWUP_FACTOR};

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub field: SpectralField,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Abort {
    /// Time of the last finite state.
    pub t: f64,
    pub reason: String,
}

/// Output of [`run`]: sample times, optional states, the norm report and
/// the final state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Option<Vec<Snapshot>>,
    pub report: NormReport,
    pub final_state: SpectralField,
    pub steps: usize,
    pub aborted: Option<Abort>,
}

struct Recorder {
    builder: ReportBuilder,
    stage_budgets: bool,
    snapshot_every: Option<usize>,
    times: Vec<f64>,
    snapshots: Option<Vec<Snapshot>>,
    last_step: Option<usize>,
}

impl Recorder {
    fn record(&mut self, theta: &SpectralField, t: f64, step: usize, budgets: (f64, f64)) {
        let row_index = self.times.len();
        if self.stage_budgets {
            self.builder
                .record_row_with_budgets(theta, t, budgets.0, budgets.1);
        } else {
            self.builder.record_row(theta, t);
        }
        self.times.push(t);
        if let (Some(every), Some(snaps)) = (self.snapshot_every, self.snapshots.as_mut()) {
            if row_index.is_multiple_of(every) {
                snaps.push(Snapshot {
                    step,
                    t,
                    field: theta.clone(),
                });
            }
        }
        self.last_step = Some(step);
    }
}

/// Fixed step count, or `None` when `t_end` is not a whole number of steps
/// (the last step is then shortened).
fn whole_steps(t_end: f64, dt: f64) -> Option<usize> {
    let n = (t_end / dt).round();
    ((n * dt - t_end).abs() <= 1e-9 * dt).then_some(n as usize)
}

/// Integrates from `theta0` to `config.t_end`.
///
/// Rows are recorded at `t = 0`, every `diag_stride` steps, and at the
/// final time. NaN/Inf or `‖θ‖_{H¹}` above [`BLOWUP_FACTOR`] times its
/// initial value stops the run; the trajectory is returned with
/// [`Trajectory::aborted`] set and the report ending at the last valid state.
pub fn run(theta0: &SpectralField, config: &SolverConfig) -> Result<Trajectory, SolverError> {
    config.validate()?;
    if !theta0.is_finite() {
        return Err(SolverError::NonFiniteInitial);
    }
    let grid = theta0.grid().clone();
    let diag = DiagnosticsConfig::new(&config.params, config.sobolev_s);
    let builder = ReportBuilder::new(&grid, diag);
    let mut stepper = Stepper::new(&grid, &config.params);
    let stage_budgets = config.budget_quadrature == BudgetQuadrature::Stages;

    let h1_initial = sobolev_norm(theta0, 1.0, false);
    let mut theta = theta0.clone();
    let mut t = 0.0;
    let mut step = 0usize;
    let mut budgets = (0.0, 0.0);
    let mut rec = Recorder {
        builder,
        stage_budgets,
        snapshot_every: config.snapshot_every,
        times: Vec::new(),
        snapshots: config.snapshot_every.map(|_| Vec::new()),
        last_step: None,
    };
    let mut aborted = None;
    rec.record(&theta, t, step, budgets);

    let fixed_steps = match config.dt_policy {
        DtPolicy::Fixed(dt) => whole_steps(config.t_end, dt),
        DtPolicy::Cfl { .. } => None,
    };
    let weights = stage_budgets.then(|| rec.builder.weights().clone());

    loop {
        let (dt, t_next, last) = match (config.dt_policy, fixed_steps) {
            (DtPolicy::Fixed(dt), Some(n)) => {
                if step >= n {
                    break;
                }
                let last = step + 1 == n;
                (
                    dt,
                    if last {
                        config.t_end
                    } else {
                        (step + 1) as f64 * dt
                    },
                    last,
                )
            }
            (policy, _) => {
                let remaining = config.t_end - t;
                if remaining <= 0.0 {
                    break;
                }
                let dt = match policy {
                    DtPolicy::Fixed(dt) => dt,
                    DtPolicy::Cfl { .. } => {
                        let (u1, u2) = riesz_velocity(&theta);
                        adapt_dt(&u1.to_physical(), &u2.to_physical(), &grid, policy)
                    }
                };
                // absorb a sliver shorter than 1e-9 of a step into this one
                if dt >= remaining * (1.0 - 1e-9) {
                    (remaining, config.t_end, true)
                } else {
                    (dt, t + dt, false)
                }
            }
        };

        let outcome = stepper.step(&theta, dt, weights.as_ref());
        let blown = match &outcome {
            Err(_) => Some("non-finite state".to_string()),
            Ok((next, _)) => {
                let h1 = sobolev_norm(next, 1.0, false);
                (h1_initial > 0.0 && h1 > BLOWUP_FACTOR * h1_initial)
                    .then(|| format!("H1 norm {h1:e} exceeds {BLOWUP_FACTOR:e} x initial"))
            }
        };
        if let Some(reason) = blown {
            if rec.last_step != Some(step) {
                rec.record(&theta, t, step, budgets);
            }
            rec.builder.mark_aborted(t);
            aborted = Some(Abort { t, reason });
            break;
        }
        let (next, inc) = outcome.expect("checked above");
        theta = next;
        budgets.0 += inc.0;
        budgets.1 += inc.1;
        t = t_next;
        step += 1;
        if step.is_multiple_of(config.diag_stride) || last {
            rec.record(&theta, t, step, budgets);
        }
        if last {
            break;
        }
    }

    Ok(Trajectory {
        times: rec.times,
        snapshots: rec.snapshots,
        report: rec.builder.finish(),
        final_state: theta,
        steps: step,
        aborted,
    })
}
