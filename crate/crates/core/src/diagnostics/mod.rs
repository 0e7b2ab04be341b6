//! Norms, regularity thresholds, norm reports and boundedness verdicts.

mod norms;
mod report;
mod thresholds;
mod verdict;

use thiserror::Error;

pub use norms::{aniso_sobolev_norm, lp_norm, sobolev_norm, DissipationWeights};
pub use report::{DiagnosticsConfig, NormReport, NormRow, ReportBuilder, CSV_HEADER};
pub use thresholds::{condition_global, regularity_threshold, rho_exponent, BOUNDARY_TOL};
pub use verdict::{certify_boundedness, Verdict, MIN_ROWS, TAIL_SLOPE_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("Lebesgue exponent must lie in [2, ∞], got {0}")]
    BadExponent(f64),
    #[error("alpha and beta must lie in (0,1), got ({0}, {1})")]
    OutOfRange(f64, f64),
    #[error("exponent undefined outside regularity regime (alpha={0}, beta={1})")]
    OutsideRegime(f64, f64),
    #[error("report has {0} rows, at least {MIN_ROWS} are needed")]
    TooFewRows(usize),
    #[error("report tracks s = {recorded}, verdict requested for s = {requested}")]
    IndexMismatch { recorded: f64, requested: f64 },
    #[error("{0}")]
    Spectral(String),
}

impl From<crate::spectral::SpectralError> for DiagnosticsError {
    fn from(e: crate::spectral::SpectralError) -> Self {
        Self::Spectral(e.to_string())
    }
}
