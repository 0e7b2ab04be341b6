//! Initial data for harness runs.

use std::f64::consts::PI;
use std::fs::File;
use std::io::BufReader;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::sobolev_norm;
use crate::oracle::{sample_field, FieldSampler, Normalization};
use crate::spectral::snapshot::read_snapshot_on;
use crate::spectral::{Grid, PhysicalField, SpectralField};

use super::{HarnessError, InitSpec};

/// Builds `θ₀` on `grid`. Seeded kinds draw from `seed`.
pub fn initial_field(
    grid: &Arc<Grid>,
    init: &InitSpec,
    seed: u64,
) -> Result<SpectralField, HarnessError> {
    let (w1, w2) = (2.0 * PI / grid.l1(), 2.0 * PI / grid.l2());
    Ok(match init {
        InitSpec::Default => PhysicalField::from_fn(grid.clone(), |x1, x2| {
            (w1 * x1).sin() * (w2 * x2).sin() + (w2 * x2).cos()
        })
        .to_spectral(),
        InitSpec::CosX1 => {
            PhysicalField::from_fn(grid.clone(), |x1, _| (w1 * x1).cos()).to_spectral()
        }
        InitSpec::Random { kmax } => {
            let sampler = FieldSampler::new(grid.clone(), *kmax, seed, Normalization::UnitH2)
                .map_err(|e| HarnessError::Invalid(e.to_string()))?;
            sample_field(&sampler)
        }
        InitSpec::Rough { regularity } => rough_field(grid, *regularity, seed),
        InitSpec::File { path } => {
            let file = File::open(path).map_err(|e| {
                HarnessError::Invalid(format!("cannot open initial data {}: {e}", path.display()))
            })?;
            read_snapshot_on(BufReader::new(file), grid)?.to_spectral()
        }
    })
}

/// Random phases with amplitude `|k|^{−(1+s)}` on every mode kept by the
/// two-thirds rule, mean zero, unit `L²` norm.
pub fn rough_field(grid: &Arc<Grid>, regularity: f64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid.clone());
    let (c1, c2) = (grid.n1() as f64 / 3.0, grid.n2() as f64 / 3.0);
    for i1 in 0..grid.n1() {
        for i2 in 0..grid.n2() {
            let (j1, j2) = (grid.signed_index1(i1), grid.signed_index2(i2));
            let phase: f64 = rng.random_range(0.0..2.0 * PI);
            if (j1, j2) == (0, 0) || j1.unsigned_abs() as f64 > c1 || j2.unsigned_abs() as f64 > c2
            {
                continue;
            }
            let k = grid.k1()[i1].hypot(grid.k2()[i2]);
            f.coeffs_mut()[grid.flat(i1, i2)] =
                Complex64::from_polar(k.powf(-(1.0 + regularity)), phase);
        }
    }
    // keep the real part, then normalize
    let f = f.to_physical().to_spectral();
    let norm = sobolev_norm(&f, 0.0, false);
    if norm > 0.0 {
        f.scaled(1.0 / norm)
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::lp_norm;

    #[test]
    fn default_profile_values() {
        let g = Grid::square(16).unwrap();
        let f = initial_field(&g, &InitSpec::Default, 0)
            .unwrap()
            .to_physical();
        let (x1, x2) = g.point(4, 4);
        let want = x1.sin() * x2.sin() + x2.cos();
        assert!((f.values()[g.flat(4, 4)] - want).abs() < 1e-13);
    }

    #[test]
    fn cos_on_stretched_box() {
        let g = Grid::new(16, 8, 4.0 * PI, 1.0).unwrap();
        let f = initial_field(&g, &InitSpec::CosX1, 0)
            .unwrap()
            .to_physical();
        let (x1, _) = g.point(3, 0);
        assert!((f.values()[g.flat(3, 5)] - (0.5 * x1).cos()).abs() < 1e-13);
    }

    #[test]
    fn random_is_seeded_and_unit_h2() {
        let g = Grid::square(32).unwrap();
        let init = InitSpec::Random { kmax: 4 };
        let a = initial_field(&g, &init, 7).unwrap();
        let b = initial_field(&g, &init, 7).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());
        assert!((sobolev_norm(&a, 2.0, false) - 1.0).abs() < 1e-12);
        assert!(initial_field(&g, &InitSpec::Random { kmax: 20 }, 7).is_err());
    }

    #[test]
    fn rough_profile_is_normalized_and_rough() {
        let g = Grid::square(64).unwrap();
        let f = rough_field(&g, 1.0, 3);
        assert!((lp_norm(&f.to_physical(), 2.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(f.coeff(0, 0).norm() < 1e-12);
        assert!(f.hermitian_defect() < 1e-12);
        // H^s with s above the profile regularity grows with the cutoff
        let coarse = rough_field(&Grid::square(32).unwrap(), 1.0, 3);
        assert!(sobolev_norm(&f, 2.0, true) > 1.5 * sobolev_norm(&coarse, 2.0, true));
    }

    #[test]
    fn missing_file_is_reported() {
        let g = Grid::square(16).unwrap();
        let init = InitSpec::File {
            path: "/nonexistent/theta.aqgf".into(),
        };
        assert!(matches!(
            initial_field(&g, &init, 0),
            Err(HarnessError::Invalid(_))
        ));
    }
}
