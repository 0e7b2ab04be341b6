use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("alpha must lie in (0,1), got {0}")]
    Alpha(f64),
    #[error("beta must lie in (0,1), got {0}")]
    Beta(f64),
    #[error("mu must be positive, got {0}")]
    Mu(f64),
    #[error("nu must be positive, got {0}")]
    Nu(f64),
}

/// Orders and strengths of the two directional dissipation operators
/// `μ|∂₁|^{2α}` and `ν|∂₂|^{2β}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnisotropyParams {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub nu: f64,
}

impl AnisotropyParams {
    pub fn new(alpha: f64, beta: f64, mu: f64, nu: f64) -> Result<Self, ParamsError> {
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        if !open_unit(alpha) {
            return Err(ParamsError::Alpha(alpha));
        }
        if !open_unit(beta) {
            return Err(ParamsError::Beta(beta));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(ParamsError::Mu(mu));
        }
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(ParamsError::Nu(nu));
        }
        Ok(Self {
            alpha,
            beta,
            mu,
            nu,
        })
    }

    /// Diagnostic mode with both dissipation strengths set to zero. The
    /// evolution is then pure transport and the Galerkin system conserves
    /// every quadratic invariant; only used to check the scheme.
    pub fn inviscid(alpha: f64, beta: f64) -> Result<Self, ParamsError> {
        let p = Self::new(alpha, beta, 1.0, 1.0)?;
        Ok(Self {
            mu: 0.0,
            nu: 0.0,
            ..p
        })
    }

    /// Symbol of the linear operator at wavevector `(xi1, xi2)`.
    #[inline]
    pub fn symbol(&self, xi1: f64, xi2: f64) -> f64 {
        let mut s = 0.0;
        if self.mu != 0.0 && xi1 != 0.0 {
            s += self.mu * xi1.abs().powf(2.0 * self.alpha);
        }
        if self.nu != 0.0 && xi2 != 0.0 {
            s += self.nu * xi2.abs().powf(2.0 * self.beta);
        }
        s
    }
}
