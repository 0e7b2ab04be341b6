//! Empirical boundedness certificate for a finite-horizon run.
//!
//! A finite run cannot certify anything about `t → ∞`; the verdict is a
//! heuristic built from the tail growth rate of `‖θ‖_{Hˢ}` and the decay of
//! the dissipation budget increments.

use serde::Serialize;

use super::{DiagnosticsError, NormReport};

/// Minimum number of report rows for a verdict.
pub const MIN_ROWS: usize = 16;
/// Largest admissible tail log-slope of `‖θ‖_{Hˢ}`, per unit time.
pub const TAIL_SLOPE_TOL: f64 = 1e-3;
/// Budget increments below this count as settled.
pub const BUDGET_ABS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub bounded: bool,
    /// Supremum over samples of `‖θ‖²_{Hˢ} + ∫‖|∂₁|^αθ‖²_{Hˢ} + ∫‖|∂₂|^βθ‖²_{Hˢ}`.
    pub sup_norm: f64,
    pub sup_time: f64,
    /// Least-squares slope of `ln‖θ‖_{Hˢ}` over the second half of the run.
    pub growth_rate_tail: f64,
    pub budgets_settling: bool,
    pub reason: Option<String>,
}

fn interp(ts: &[f64], ys: &[f64], t: f64) -> f64 {
    match ts.iter().position(|&x| x >= t) {
        None => *ys.last().unwrap(),
        Some(0) => ys[0],
        Some(j) => {
            let (t0, t1) = (ts[j - 1], ts[j]);
            let w = if t1 > t0 { (t - t0) / (t1 - t0) } else { 1.0 };
            ys[j - 1] + w * (ys[j] - ys[j - 1])
        }
    }
}

fn log_slope(ts: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > 0.0 && y.is_finite())
        .map(|(&t, &y)| (t, y.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Budget increment over the last quarter must be at most half of the one
/// over the second quarter, or negligible in absolute terms.
fn settling(ts: &[f64], budget: &[f64]) -> bool {
    let (t0, t1) = (ts[0], *ts.last().unwrap());
    let at = |q: f64| interp(ts, budget, t0 + q * (t1 - t0));
    let second = at(0.5) - at(0.25);
    let last = at(1.0) - at(0.75);
    last <= 0.5 * second || last.abs() <= BUDGET_ABS_TOL
}

/// Classifies a report. Aborted runs are never bounded.
pub fn certify_boundedness(report: &NormReport, s: f64) -> Result<Verdict, DiagnosticsError> {
    let rows = &report.rows;
    let combo: Vec<f64> = rows
        .iter()
        .map(|r| r.hs * r.hs + r.cumdiss1 + r.cumdiss2)
        .collect();
    let (sup_idx, sup_norm) =
        combo
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
            );

    if let Some(t) = report.aborted_at {
        return Ok(Verdict {
            bounded: false,
            sup_norm: if rows.is_empty() { f64::NAN } else { sup_norm },
            sup_time: rows.get(sup_idx).map_or(f64::NAN, |r| r.t),
            growth_rate_tail: f64::NAN,
            budgets_settling: false,
            reason: Some(format!("run aborted at t = {t:e} (blow-up or instability)")),
        });
    }
    if rows.len() < MIN_ROWS {
        return Err(DiagnosticsError::TooFewRows(rows.len()));
    }
    if report.s != s {
        return Err(DiagnosticsError::IndexMismatch {
            recorded: report.s,
            requested: s,
        });
    }

    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let half = ts[0] + 0.5 * (ts[ts.len() - 1] - ts[0]);
    let tail: Vec<usize> = (0..rows.len()).filter(|&i| ts[i] >= half).collect();
    let tail_t: Vec<f64> = tail.iter().map(|&i| ts[i]).collect();
    let tail_h: Vec<f64> = tail.iter().map(|&i| rows[i].hs).collect();
    let slope = log_slope(&tail_t, &tail_h);

    let b1: Vec<f64> = rows.iter().map(|r| r.cumdiss1).collect();
    let b2: Vec<f64> = rows.iter().map(|r| r.cumdiss2).collect();
    let budgets_settling = settling(&ts, &b1) && settling(&ts, &b2);
    let flagged = rows.iter().any(|r| r.flag);

    let bounded = !flagged && slope <= TAIL_SLOPE_TOL && budgets_settling;
    let reason = if flagged {
        Some("non-finite diagnostics".to_string())
    } else if slope > TAIL_SLOPE_TOL {
        Some(format!(
            "tail log-slope {slope:e} exceeds {TAIL_SLOPE_TOL:e}"
        ))
    } else if !budgets_settling {
        Some("dissipation budgets still growing".to_string())
    } else {
        None
    };
    Ok(Verdict {
        bounded,
        sup_norm,
        sup_time: rows[sup_idx].t,
        growth_rate_tail: slope,
        budgets_settling,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::NormRow;

    fn row(t: f64, hs: f64, c1: f64, c2: f64) -> NormRow {
        NormRow {
            t,
            lp_norms: vec![],
            hs,
            hdot1: 0.0,
            hdot2: 0.0,
            a1_hs: 0.0,
            a2_hs: 0.0,
            a1_hdot1: 0.0,
            a2_hdot1: 0.0,
            a1_hdot2: 0.0,
            a2_hdot2: 0.0,
            cumdiss1: c1,
            cumdiss2: c2,
            flag: false,
        }
    }

    fn report(rows: Vec<NormRow>) -> NormReport {
        NormReport {
            s: 2.0,
            rows,
            aborted_at: None,
        }
    }

    #[test]
    fn growing_norm_is_unbounded() {
        let rows = (0..=40).map(|i| {
            let t = i as f64 * 0.5;
            row(t, (0.1 * t).exp(), 0.0, 0.0)
        });
        let v = certify_boundedness(&report(rows.collect()), 2.0).unwrap();
        assert!(!v.bounded);
        assert!((v.growth_rate_tail - 0.1).abs() < 1e-12);
    }

    #[test]
    fn zero_run_is_bounded() {
        let rows = (0..20).map(|i| row(i as f64, 0.0, 0.0, 0.0)).collect();
        let v = certify_boundedness(&report(rows), 2.0).unwrap();
        assert!(v.bounded);
        assert_eq!(v.sup_norm, 0.0);
    }

    #[test]
    fn decaying_run_peaks_at_start() {
        // hs = e^{-t}, budgets saturating like 1 - e^{-2t}
        let rows = (0..=32)
            .map(|i| {
                let t = i as f64 / 8.0;
                let b = 0.5 * (1.0 - (-2.0 * t).exp());
                row(t, (-t).exp(), b, 0.0)
            })
            .collect();
        let v = certify_boundedness(&report(rows), 2.0).unwrap();
        assert!(v.bounded);
        assert_eq!(v.sup_time, 0.0);
        assert!((v.growth_rate_tail + 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_budget_growth_not_settling() {
        let rows = (0..=20)
            .map(|i| row(i as f64, 1.0, i as f64, 0.0))
            .collect();
        let v = certify_boundedness(&report(rows), 2.0).unwrap();
        assert!(!v.bounded);
        assert!(!v.budgets_settling);
    }

    #[test]
    fn short_and_aborted_reports() {
        let rows: Vec<_> = (0..3).map(|i| row(i as f64, 1.0, 0.0, 0.0)).collect();
        assert_eq!(
            certify_boundedness(&report(rows.clone()), 2.0),
            Err(DiagnosticsError::TooFewRows(3))
        );
        let mut r = report(rows);
        r.aborted_at = Some(2.0);
        let v = certify_boundedness(&r, 2.0).unwrap();
        assert!(!v.bounded);
        assert!(v.reason.unwrap().contains("aborted"));
    }
}
