use crate::spectral::{apply_directional_fractional, Axis, PhysicalField, SpectralField};

use super::DiagnosticsError;

/// `(Σ|f|^p Δx₁Δx₂)^{1/p}`, or `max|f|` for `p = ∞`.
pub fn lp_norm(f: &PhysicalField, p: f64) -> Result<f64, DiagnosticsError> {
    if p.is_nan() || p < 2.0 {
        return Err(DiagnosticsError::BadExponent(p));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let area = f.grid().cell_area();
    if p == 2.0 {
        return Ok((f.values().iter().map(|v| v * v).sum::<f64>() * area).sqrt());
    }
    // scale by the max to keep |f|^p in range for large p
    let m = f.max_abs();
    if m == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = f.values().iter().map(|v| (v.abs() / m).powf(p)).sum();
    Ok(m * (s * area).powf(1.0 / p))
}

#[inline]
fn sobolev_weight(r2: f64, s: f64, homogeneous: bool) -> f64 {
    if homogeneous {
        if r2 == 0.0 {
            0.0
        } else {
            r2.powf(s)
        }
    } else {
        (1.0 + r2).powf(s)
    }
}

/// `‖f‖_{Hˢ}` (weight `(1+|ξ|²)^s`) or `‖f‖_{Ḣˢ}` (weight `|ξ|^{2s}`, mean
/// mode excluded), scaled so that the `s = 0` inhomogeneous value equals the
/// `L²` quadrature norm.
pub fn sobolev_norm(f: &SpectralField, s: f64, homogeneous: bool) -> f64 {
    let g = f.grid();
    let n2 = g.n2();
    let mut acc = 0.0;
    for (idx, c) in f.coeffs().iter().enumerate() {
        let a = c.norm_sqr();
        if a == 0.0 {
            continue;
        }
        let (x1, x2) = (g.k1()[idx / n2], g.k2()[idx % n2]);
        acc += sobolev_weight(x1 * x1 + x2 * x2, s, homogeneous) * a;
    }
    (acc * g.plancherel_factor()).sqrt()
}

/// `‖|∂_axis|^power f‖` in `Hˢ` or `Ḣˢ`.
pub fn aniso_sobolev_norm(
    f: &SpectralField,
    axis: Axis,
    power: f64,
    s: f64,
    homogeneous: bool,
) -> Result<f64, DiagnosticsError> {
    let g = apply_directional_fractional(f, axis, power)?;
    Ok(sobolev_norm(&g, s, homogeneous))
}

/// Precomputed per-mode weights of the two dissipation integrands
/// `‖|∂₁|^α θ‖²_{Hˢ}` and `‖|∂₂|^β θ‖²_{Hˢ}`, Plancherel factor included.
#[derive(Debug, Clone)]
pub struct DissipationWeights {
    w1: Vec<f64>,
    w2: Vec<f64>,
}

impl DissipationWeights {
    pub fn new(grid: &crate::spectral::Grid, alpha: f64, beta: f64, s: f64) -> Self {
        let pf = grid.plancherel_factor();
        let mut w1 = Vec::with_capacity(grid.len());
        let mut w2 = Vec::with_capacity(grid.len());
        for &x1 in grid.k1() {
            for &x2 in grid.k2() {
                let base = pf * (1.0 + x1 * x1 + x2 * x2).powf(s);
                w1.push(if x1 == 0.0 {
                    0.0
                } else {
                    base * x1.abs().powf(2.0 * alpha)
                });
                w2.push(if x2 == 0.0 {
                    0.0
                } else {
                    base * x2.abs().powf(2.0 * beta)
                });
            }
        }
        Self { w1, w2 }
    }

    /// Per-mode weights of the two integrands, flat-indexed.
    pub(crate) fn parts(&self) -> (&[f64], &[f64]) {
        (&self.w1, &self.w2)
    }

    /// Both squared integrands at once.
    pub fn integrands(&self, f: &SpectralField) -> (f64, f64) {
        let mut a = 0.0;
        let mut b = 0.0;
        for ((c, w1), w2) in f.coeffs().iter().zip(&self.w1).zip(&self.w2) {
            let m = c.norm_sqr();
            a += w1 * m;
            b += w2 * m;
        }
        (a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    fn cos_field(k: f64) -> SpectralField {
        let g = Grid::square(32).unwrap();
        PhysicalField::from_fn(g, move |x1, _| (k * x1).cos()).to_spectral()
    }

    #[test]
    fn lp_examples() {
        let g = Grid::square(32).unwrap();
        let f = PhysicalField::from_fn(g.clone(), |x1, _| x1.cos());
        assert!((lp_norm(&f, 2.0).unwrap() - PI * 2f64.sqrt()).abs() < 1e-12);
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
        // ∫cos⁴ over the box = (3/8)(2π)²
        let l4 = (0.375 * 4.0 * PI * PI).powf(0.25);
        assert!((lp_norm(&f, 4.0).unwrap() - l4).abs() < 1e-12);
        let z = PhysicalField::zeros(g);
        for p in [2.0, 3.5, 4.0, f64::INFINITY] {
            assert_eq!(lp_norm(&z, p).unwrap(), 0.0);
        }
        assert_eq!(lp_norm(&f, 1.5), Err(DiagnosticsError::BadExponent(1.5)));
    }

    #[test]
    fn sobolev_examples() {
        let f = cos_field(1.0);
        let l2 = lp_norm(&f.to_physical(), 2.0).unwrap();
        assert!((sobolev_norm(&f, 0.0, false) - l2).abs() < 1e-12);
        assert!((sobolev_norm(&f, 1.0, true) - l2).abs() < 1e-12);
        assert!((sobolev_norm(&f, 1.0, false) - 2f64.sqrt() * l2).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_drops_mean() {
        let g = Grid::square(16).unwrap();
        let f = PhysicalField::from_fn(g, |_, _| 2.0).to_spectral();
        assert_eq!(sobolev_norm(&f, 0.0, true), 0.0);
        assert!((sobolev_norm(&f, 0.0, false) - 2.0 * 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn aniso_examples() {
        let g = Grid::square(32).unwrap();
        let c2 = PhysicalField::from_fn(g, |_, x2| x2.cos()).to_spectral();
        assert_eq!(
            aniso_sobolev_norm(&c2, Axis::X1, 0.3, 2.0, false).unwrap(),
            0.0
        );
        let c1 = cos_field(1.0);
        let base = sobolev_norm(&c1, 0.0, false);
        let a = aniso_sobolev_norm(&c1, Axis::X1, 0.7, 0.0, false).unwrap();
        assert!((a - base).abs() < 1e-12);
        let c2x = cos_field(2.0);
        let a = aniso_sobolev_norm(&c2x, Axis::X1, 0.5, 0.0, false).unwrap();
        assert!((a - 2f64.sqrt() * base).abs() < 1e-12);
    }

    #[test]
    fn weights_match_composed_norms() {
        let g = Grid::new(16, 24, 3.0, 5.0).unwrap();
        let f = PhysicalField::from_fn(g.clone(), |x1, x2| {
            (2.0 * x1).sin() * (x2 + 0.3).cos() + 0.2 * (x1 - x2).cos() + 0.4
        })
        .to_spectral();
        let w = DissipationWeights::new(&g, 0.3, 0.8, 1.5);
        let (a, b) = w.integrands(&f);
        let ea = aniso_sobolev_norm(&f, Axis::X1, 0.3, 1.5, false)
            .unwrap()
            .powi(2);
        let eb = aniso_sobolev_norm(&f, Axis::X2, 0.8, 1.5, false)
            .unwrap()
            .powi(2);
        assert!((a - ea).abs() <= 1e-12 * ea);
        assert!((b - eb).abs() <= 1e-12 * eb);
    }
}
