use std::sync::Arc;

use crate::params::AnisotropyParams;
use crate::spectral::{Grid, SpectralField};

use super::SolverError;

/// Per-mode factors `e^{−(μ|ξ₁|^{2α} + ν|ξ₂|^{2β})·dt}`. Extremely damped
/// modes may underflow to zero.
#[derive(Debug, Clone)]
pub struct LinearPropagator {
    grid: Arc<Grid>,
    dt: f64,
    factors: Vec<f64>,
}

/// Symbol of the linear operator on every mode, same layout as the fields.
pub(crate) fn linear_symbols(grid: &Grid, params: &AnisotropyParams) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    for &x1 in grid.k1() {
        for &x2 in grid.k2() {
            out.push(params.symbol(x1, x2));
        }
    }
    out
}

pub fn build_propagator(
    grid: &Arc<Grid>,
    params: &AnisotropyParams,
    dt: f64,
) -> Result<LinearPropagator, SolverError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SolverError::BadStep(dt));
    }
    let symbols = linear_symbols(grid, params);
    Ok(LinearPropagator::from_symbols(grid.clone(), &symbols, dt))
}

impl LinearPropagator {
    pub(crate) fn from_symbols(grid: Arc<Grid>, symbols: &[f64], dt: f64) -> Self {
        let factors = symbols.iter().map(|l| (-l * dt).exp()).collect();
        Self { grid, dt, factors }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn factors(&self) -> &[f64] {
        &self.factors
    }

    pub fn factor(&self, i1: usize, i2: usize) -> f64 {
        self.factors[self.grid.flat(i1, i2)]
    }

    pub fn apply(&self, f: &SpectralField) -> SpectralField {
        let mut out = f.clone();
        for (c, e) in out.coeffs_mut().iter_mut().zip(&self.factors) {
            *c *= *e;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_mode_factor() {
        let g = Grid::square(16).unwrap();
        let p = AnisotropyParams::new(0.5, 0.5, 1.0, 1.0).unwrap();
        let prop = build_propagator(&g, &p, 1.0).unwrap();
        assert!((prop.factor(1, 0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((prop.factor(0, 15) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(prop.factor(0, 0), 1.0);
    }

    #[test]
    fn factors_in_unit_interval() {
        let g = Grid::new(32, 16, 1.0, 9.0).unwrap();
        let p = AnisotropyParams::new(0.9, 0.1, 3.0, 0.5).unwrap();
        let prop = build_propagator(&g, &p, 1e-4).unwrap();
        assert!(prop.factors().iter().all(|&e| e > 0.0 && e <= 1.0));
        assert_eq!(prop.factor(0, 0), 1.0);
    }

    #[test]
    fn small_dt_tends_to_identity() {
        let g = Grid::square(16).unwrap();
        let p = AnisotropyParams::new(0.7, 0.4, 2.0, 2.0).unwrap();
        let prop = build_propagator(&g, &p, 1e-14).unwrap();
        assert!(prop.factors().iter().all(|&e| (1.0 - e) < 1e-12));
        assert!(build_propagator(&g, &p, 0.0).is_err());
        assert!(build_propagator(&g, &p, f64::NAN).is_err());
    }
}
