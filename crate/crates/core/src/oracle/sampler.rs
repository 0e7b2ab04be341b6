use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::diagnostics::{lp_norm, sobolev_norm};
use crate::spectral::{Grid, SpectralField};

use super::OracleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Normalization {
    UnitL2,
    UnitH2,
}

/// Generator of band-limited, mean-free random fields.
#[derive(Debug, Clone)]
pub struct FieldSampler {
    grid: Arc<Grid>,
    kmax: usize,
    seed: u64,
    normalization: Normalization,
}

impl FieldSampler {
    pub fn new(
        grid: Arc<Grid>,
        kmax: usize,
        seed: u64,
        normalization: Normalization,
    ) -> Result<Self, OracleError> {
        let limit = grid.n1().min(grid.n2()) / 3;
        if kmax == 0 {
            return Err(OracleError::EmptyBand);
        }
        if kmax > limit {
            return Err(OracleError::BandTooWide { kmax, limit });
        }
        Ok(Self {
            grid,
            kmax,
            seed,
            normalization,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// The same sampler with a different seed. Suites use
    /// `seed + sample_index` so every sample is reproducible on its own.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn with_kmax(&self, kmax: usize) -> Result<Self, OracleError> {
        Self::new(self.grid.clone(), kmax, self.seed, self.normalization)
    }
}

/// Complex Gaussian coefficients on `|index₁|, |index₂| ≤ kmax`,
/// symmetrized to `F̂(−ξ) = conj F̂(ξ)`, zero mean, then normalized.
pub fn sample_field(sampler: &FieldSampler) -> SpectralField {
    let g = &sampler.grid;
    let k = sampler.kmax as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let mut raw = vec![Complex64::default(); g.len()];
    for i1 in 0..g.n1() {
        for i2 in 0..g.n2() {
            if g.signed_index1(i1).abs() <= k && g.signed_index2(i2).abs() <= k {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                raw[g.flat(i1, i2)] = Complex64::new(re, im);
            }
        }
    }
    let mut coeffs = vec![Complex64::default(); g.len()];
    for i1 in 0..g.n1() {
        for i2 in 0..g.n2() {
            let (m1, m2) = g.mirror(i1, i2);
            coeffs[g.flat(i1, i2)] = 0.5 * (raw[g.flat(i1, i2)] + raw[g.flat(m1, m2)].conj());
        }
    }
    coeffs[0] = Complex64::default();
    let f = SpectralField::new(g.clone(), coeffs).expect("grid-sized");
    let norm = match sampler.normalization {
        Normalization::UnitL2 => lp_norm(&f.to_physical(), 2.0).expect("p = 2"),
        Normalization::UnitH2 => sobolev_norm(&f, 2.0, false),
    };
    if norm > 0.0 {
        f.scaled(1.0 / norm)
    } else {
        f
    }
}
