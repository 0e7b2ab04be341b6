use std::sync::Arc;

use num_complex::Complex64;

use super::{Grid, SpectralError};

/// Point values of a real scalar on the grid nodes.
#[derive(Debug, Clone)]
pub struct PhysicalField {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

/// Discrete Fourier coefficients `θ̂(ξ)` of a real field.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Arc<Grid>,
    coeffs: Vec<Complex64>,
}

impl PhysicalField {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != grid.len() {
            return Err(SpectralError::ShapeMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let values = vec![0.0; grid.len()];
        Self { grid, values }
    }

    /// Samples `f(x₁, x₂)` at every node.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i1 in 0..grid.n1() {
            for i2 in 0..grid.n2() {
                let (x1, x2) = grid.point(i1, i2);
                values.push(f(x1, x2));
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Forward transform, unnormalized: `F̂(ξ) = Σ f(x) e^{−iξ·x}`.
    pub fn to_spectral(&self) -> SpectralField {
        let mut coeffs: Vec<Complex64> = self
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        self.grid.fft2(&mut coeffs, false);
        SpectralField {
            grid: self.grid.clone(),
            coeffs,
        }
    }
}

impl SpectralField {
    pub fn new(grid: Arc<Grid>, coeffs: Vec<Complex64>) -> Result<Self, SpectralError> {
        if coeffs.len() != grid.len() {
            return Err(SpectralError::ShapeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let coeffs = vec![Complex64::default(); grid.len()];
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, i1: usize, i2: usize) -> Complex64 {
        self.coeffs[self.grid.flat(i1, i2)]
    }

    /// Inverse transform, divided by `n1·n2`; the imaginary residue left by
    /// rounding is dropped.
    pub fn to_physical(&self) -> PhysicalField {
        let mut data = self.coeffs.clone();
        self.grid.fft2(&mut data, true);
        let scale = 1.0 / self.grid.len() as f64;
        let values = data.into_iter().map(|c| c.re * scale).collect();
        PhysicalField {
            grid: self.grid.clone(),
            values,
        }
    }

    /// Returns a new field with every coefficient multiplied by
    /// `symbol(i1, i2)`.
    pub fn map_modes(&self, mut symbol: impl FnMut(usize, usize) -> Complex64) -> Self {
        let n2 = self.grid.n2();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| c * symbol(idx / n2, idx % n2))
            .collect();
        Self {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// Same as [`map_modes`](Self::map_modes) with a real symbol.
    pub fn map_modes_real(&self, mut symbol: impl FnMut(usize, usize) -> f64) -> Self {
        self.map_modes(|i1, i2| Complex64::new(symbol(i1, i2), 0.0))
    }

    /// `self + scale·other`.
    pub fn axpy(&self, scale: f64, other: &Self) -> Result<Self, SpectralError> {
        self.ensure_same_grid(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b * scale)
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            coeffs,
        })
    }

    pub fn scaled(&self, scale: f64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * scale).collect();
        Self {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<(), SpectralError> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(SpectralError::GridMismatch)
        }
    }

    /// Largest `|F̂(−ξ) − conj F̂(ξ)|` over all modes.
    pub fn hermitian_defect(&self) -> f64 {
        let g = &self.grid;
        let mut worst = 0.0f64;
        for i1 in 0..g.n1() {
            for i2 in 0..g.n2() {
                let (m1, m2) = g.mirror(i1, i2);
                let d = (self.coeff(m1, m2) - self.coeff(i1, i2).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Discrete real inner product `Σ_x f(x) g(x)` computed in spectral space
    /// (`Σ_ξ Re(F̂ conj Ĝ) / (n1·n2)`).
    pub fn inner(&self, other: &Self) -> Result<f64, SpectralError> {
        self.ensure_same_grid(other)?;
        let s: f64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum();
        Ok(s / self.grid.len() as f64)
    }
}
