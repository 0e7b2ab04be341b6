use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::params::AnisotropyParams;
use crate::spectral::{Axis, Grid, SpectralField};

use super::norms::{aniso_sobolev_norm, lp_norm, sobolev_norm, DissipationWeights};

pub const CSV_HEADER: &str = "t,l2,l4,linf,hs,hdot1,hdot2,a1_hs,a2_hs,a1_hdot1,a2_hdot1,a1_hdot2,a2_hdot2,cumdiss1,cumdiss2,flag";

/// Which quantities a [`NormReport`] tracks.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsConfig {
    /// Lebesgue exponents; `f64::INFINITY` for the max norm.
    pub lp_exponents: Vec<f64>,
    /// Sobolev index of the `Hˢ` columns and dissipation budgets.
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl DiagnosticsConfig {
    pub fn new(params: &AnisotropyParams, s: f64) -> Self {
        Self {
            lp_exponents: vec![2.0, 4.0, f64::INFINITY],
            s,
            alpha: params.alpha,
            beta: params.beta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRow {
    pub t: f64,
    /// `(p, ‖θ‖_{L^p})` for every configured exponent.
    pub lp_norms: Vec<(f64, f64)>,
    pub hs: f64,
    pub hdot1: f64,
    pub hdot2: f64,
    pub a1_hs: f64,
    pub a2_hs: f64,
    pub a1_hdot1: f64,
    pub a2_hdot1: f64,
    pub a1_hdot2: f64,
    pub a2_hdot2: f64,
    pub cumdiss1: f64,
    pub cumdiss2: f64,
    /// Set when any entry is non-finite.
    pub flag: bool,
}

impl NormRow {
    pub fn lp(&self, p: f64) -> Option<f64> {
        self.lp_norms.iter().find(|(q, _)| *q == p).map(|(_, v)| *v)
    }

    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.lp_norms.iter().map(|(_, v)| *v).chain([
            self.hs,
            self.hdot1,
            self.hdot2,
            self.a1_hs,
            self.a2_hs,
            self.a1_hdot1,
            self.a2_hdot1,
            self.a1_hdot2,
            self.a2_hdot2,
            self.cumdiss1,
            self.cumdiss2,
        ])
    }
}

/// Time series of monitored norms and cumulative dissipation budgets.
#[derive(Debug, Clone, Default, Serialize)]
pub struct NormReport {
    pub s: f64,
    pub rows: Vec<NormRow>,
    /// Time of the last valid state when the run was stopped early.
    pub aborted_at: Option<f64>,
}

impl NormReport {
    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    pub fn last(&self) -> Option<&NormRow> {
        self.rows.last()
    }

    /// CSV text with the fixed column order of [`CSV_HEADER`]. Floats use
    /// shortest round-trip scientific notation, so output is byte-stable.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:e},{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{}",
                r.t,
                opt(r.lp(2.0)),
                opt(r.lp(4.0)),
                opt(r.lp(f64::INFINITY)),
                r.hs,
                r.hdot1,
                r.hdot2,
                r.a1_hs,
                r.a2_hs,
                r.a1_hdot1,
                r.a2_hdot1,
                r.a1_hdot2,
                r.a2_hdot2,
                r.cumdiss1,
                r.cumdiss2,
                u8::from(r.flag)
            );
        }
        out
    }
}

/// Accumulates a [`NormReport`] one sample at a time.
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    config: DiagnosticsConfig,
    weights: DissipationWeights,
    report: NormReport,
    last_integrands: Option<(f64, f64)>,
}

impl ReportBuilder {
    pub fn new(grid: &Arc<Grid>, config: DiagnosticsConfig) -> Self {
        let weights = DissipationWeights::new(grid, config.alpha, config.beta, config.s);
        let report = NormReport {
            s: config.s,
            ..Default::default()
        };
        Self {
            config,
            weights,
            report,
            last_integrands: None,
        }
    }

    pub fn config(&self) -> &DiagnosticsConfig {
        &self.config
    }

    pub fn weights(&self) -> &DissipationWeights {
        &self.weights
    }

    /// Appends a row, advancing both budgets by the trapezoid rule on the
    /// previous and current integrands.
    pub fn record_row(&mut self, theta: &SpectralField, t: f64) -> &NormRow {
        let cur = self.weights.integrands(theta);
        let (c1, c2) = match (self.report.rows.last(), self.last_integrands) {
            (Some(prev), Some(last)) => {
                let h = t - prev.t;
                (
                    prev.cumdiss1 + 0.5 * h * (last.0 + cur.0),
                    prev.cumdiss2 + 0.5 * h * (last.1 + cur.1),
                )
            }
            _ => (0.0, 0.0),
        };
        self.push(theta, t, cur, c1, c2)
    }

    /// Appends a row whose cumulative budgets were integrated elsewhere
    /// (e.g. alongside the time stepper).
    pub fn record_row_with_budgets(
        &mut self,
        theta: &SpectralField,
        t: f64,
        cumdiss1: f64,
        cumdiss2: f64,
    ) -> &NormRow {
        let cur = self.weights.integrands(theta);
        self.push(theta, t, cur, cumdiss1, cumdiss2)
    }

    fn push(
        &mut self,
        theta: &SpectralField,
        t: f64,
        integrands: (f64, f64),
        cumdiss1: f64,
        cumdiss2: f64,
    ) -> &NormRow {
        let c = &self.config;
        let phys = theta.to_physical();
        let lp_norms = c
            .lp_exponents
            .iter()
            .map(|&p| (p, lp_norm(&phys, p).unwrap_or(f64::NAN)))
            .collect();
        let aniso = |axis: Axis, s: f64, homogeneous: bool| {
            let power = match axis {
                Axis::X1 => c.alpha,
                Axis::X2 => c.beta,
            };
            aniso_sobolev_norm(theta, axis, power, s, homogeneous).unwrap_or(f64::NAN)
        };
        let mut row = NormRow {
            t,
            lp_norms,
            hs: sobolev_norm(theta, c.s, false),
            hdot1: sobolev_norm(theta, 1.0, true),
            hdot2: sobolev_norm(theta, 2.0, true),
            a1_hs: aniso(Axis::X1, c.s, false),
            a2_hs: aniso(Axis::X2, c.s, false),
            a1_hdot1: aniso(Axis::X1, 1.0, true),
            a2_hdot1: aniso(Axis::X2, 1.0, true),
            a1_hdot2: aniso(Axis::X1, 2.0, true),
            a2_hdot2: aniso(Axis::X2, 2.0, true),
            cumdiss1,
            cumdiss2,
            flag: false,
        };
        let flag = row.values().any(|v| !v.is_finite());
        row.flag = flag;
        self.last_integrands = Some(integrands);
        self.report.rows.push(row);
        self.report.rows.last().unwrap()
    }

    pub fn mark_aborted(&mut self, t: f64) {
        self.report.aborted_at = Some(t);
    }

    pub fn report(&self) -> &NormReport {
        &self.report
    }

    pub fn finish(self) -> NormReport {
        self.report
    }
}
