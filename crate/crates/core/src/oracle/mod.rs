//! Randomized numerical checks of the functional inequalities behind the
//! regularity estimates.
//!
//! The interpolation inequality and the sharp logarithm bound hold exactly in
//! the discrete setting and are asserted. The Riesz `L^p` bound and the
//! logarithmic Sobolev bound only assert the existence of a constant, so
//! those checks report an empirical constant together with stability
//! criteria.

mod lemmas;
mod report;
mod sampler;

use thiserror::Error;

pub use lemmas::{
    check_interpolation, check_ln_bound, check_log_sobolev, estimate_riesz_lp_constant,
    riesz_lp_ratio, sharp_ln_constant, vector_lp_norm, LogSobolev, INTERPOLATION_TOL, LN_BOUND_TOL,
    PLANCHEREL_TOL, STABILITY_GROWTH,
};
pub use report::{OracleReport, ORACLE_CSV_HEADER};
pub use sampler::{sample_field, FieldSampler, Normalization};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("band limit {kmax} exceeds min(n1,n2)/3 = {limit}")]
    BandTooWide { kmax: usize, limit: usize },
    #[error("band limit must be at least 1")]
    EmptyBand,
    #[error("Lebesgue exponent must be finite and > 1, got {0}")]
    BadExponent(f64),
    #[error("sigma must exceed 1, got {0}")]
    BadSigma(f64),
    #[error("interpolation weight z must lie in [0,1], got {0}")]
    BadWeight(f64),
    #[error("need at least one sample")]
    NoSamples,
    #[error("{0}")]
    Invalid(String),
}
