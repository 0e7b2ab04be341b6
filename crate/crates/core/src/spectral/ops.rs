//! Fourier multipliers and the pseudo-spectral advection term.

use num_complex::Complex64;

use super::grid::FftWork;
use super::{Axis, Grid, SpectralError, SpectralField};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_power(p: f64) -> Result<(), SpectralError> {
    if p.is_finite() && p >= 0.0 {
        Ok(())
    } else {
        Err(SpectralError::NegativePower(p))
    }
}

/// `|ξ|^p` with the conventions `0^p = 0` for `p > 0` and `x^0 = 1`.
#[inline]
fn abs_pow(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if x == 0.0 {
        0.0
    } else {
        x.abs().powf(p)
    }
}

/// Applies `|∂_axis|^power`, i.e. multiplies by `|ξ_axis|^power`.
pub fn apply_directional_fractional(
    f: &SpectralField,
    axis: Axis,
    power: f64,
) -> Result<SpectralField, SpectralError> {
    check_power(power)?;
    let g = f.grid().clone();
    Ok(match axis {
        Axis::X1 => f.map_modes_real(|i1, _| abs_pow(g.k1()[i1], power)),
        Axis::X2 => f.map_modes_real(|_, i2| abs_pow(g.k2()[i2], power)),
    })
}

/// Applies `|∇|^sigma`, i.e. multiplies by `(ξ₁² + ξ₂²)^{sigma/2}`.
pub fn apply_isotropic_fractional(
    f: &SpectralField,
    sigma: f64,
) -> Result<SpectralField, SpectralError> {
    check_power(sigma)?;
    let g = f.grid().clone();
    Ok(f.map_modes_real(|i1, i2| abs_pow(g.k1()[i1].hypot(g.k2()[i2]), sigma)))
}

/// Spectral derivative `∂_axis` (symbol `iξ_axis`). The Nyquist mode of the
/// differentiated direction is zeroed so the result stays real.
pub fn gradient(f: &SpectralField, axis: Axis) -> SpectralField {
    let g = f.grid().clone();
    match axis {
        Axis::X1 => f.map_modes(|i1, _| {
            if g.is_nyquist1(i1) {
                Complex64::default()
            } else {
                I * g.k1()[i1]
            }
        }),
        Axis::X2 => f.map_modes(|_, i2| {
            if g.is_nyquist2(i2) {
                Complex64::default()
            } else {
                I * g.k2()[i2]
            }
        }),
    }
}

/// SQG velocity `u = R^⊥θ = (−R₂θ, R₁θ)` with Riesz symbols `iξ_j/|ξ|`.
///
/// The mean mode and every mode on a Nyquist row or column are set to zero
/// in both components, which keeps the output Hermitian and makes
/// `ξ₁û₁ + ξ₂û₂` vanish identically.
pub fn riesz_velocity(theta: &SpectralField) -> (SpectralField, SpectralField) {
    let g = theta.grid().clone();
    let sym = g.riesz_symbols();
    let u1 = theta
        .coeffs()
        .iter()
        .zip(sym)
        .map(|(c, s)| I * c * s.0)
        .collect();
    let u2 = theta
        .coeffs()
        .iter()
        .zip(sym)
        .map(|(c, s)| I * c * s.1)
        .collect();
    (
        SpectralField::new(g.clone(), u1).expect("grid-sized buffer"),
        SpectralField::new(g, u2).expect("grid-sized buffer"),
    )
}

/// Two-thirds rule: zero every mode with `|index₁| > n1/3` or
/// `|index₂| > n2/3`.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    dealias_in_place(&mut out);
    out
}

pub(crate) fn dealias_in_place(f: &mut SpectralField) {
    let g = f.grid().clone();
    for (c, &keep) in f.coeffs_mut().iter_mut().zip(g.dealias_mask()) {
        if !keep {
            *c = Complex64::default();
        }
    }
}

/// Spectral representation of the dealiased transport term `u_θ·∇θ`.
///
/// The input is dealiased, velocity and gradient are formed by multipliers,
/// the products are taken at the grid nodes and the result is dealiased
/// again. For Hermitian input the two real pairs `(u₁, ∂₁θ)` and
/// `(u₂, ∂₂θ)` are packed into single complex transforms.
pub fn advection_term(theta: &SpectralField) -> SpectralField {
    let g = theta.grid().clone();
    let mut out = vec![Complex64::default(); g.len()];
    advection_into(&g, theta.coeffs(), &mut AdvectionWork::default(), &mut out);
    SpectralField::new(g, out).expect("grid-sized buffer")
}

/// Buffers reused across calls to [`advection_into`].
#[derive(Debug, Default, Clone)]
pub(crate) struct AdvectionWork {
    z1: Vec<Complex64>,
    z2: Vec<Complex64>,
    fft: FftWork,
}

/// Writes the coefficients of `u_θ·∇θ` into `out` without allocating once `work` has
/// grown to the grid size.
pub(crate) fn advection_into(
    g: &Grid,
    theta: &[Complex64],
    work: &mut AdvectionWork,
    out: &mut [Complex64],
) {
    let (n1, n2) = (g.n1(), g.n2());
    let AdvectionWork { z1, z2, fft } = work;
    z1.clear();
    z1.resize(g.len(), Complex64::default());
    z2.clear();
    z2.resize(g.len(), Complex64::default());
    let (sym, mask) = (g.riesz_symbols(), g.dealias_mask());
    for i1 in 0..n1 {
        // gradient symbols with the differentiated Nyquist removed
        let d1 = if g.is_nyquist1(i1) { 0.0 } else { g.k1()[i1] };
        for i2 in 0..n2 {
            let idx = i1 * n2 + i2;
            if !mask[idx] {
                continue;
            }
            let d2 = if g.is_nyquist2(i2) { 0.0 } else { g.k2()[i2] };
            let ic = I * theta[idx];
            // u_j + i ∂_jθ
            z1[idx] = ic * sym[idx].0 + I * ic * d1;
            z2[idx] = ic * sym[idx].1 + I * ic * d2;
        }
    }
    g.fft2_with(z1, true, fft);
    g.fft2_with(z2, true, fft);

    let scale = 1.0 / (g.len() as f64 * g.len() as f64);
    for ((o, a), b) in out.iter_mut().zip(z1.iter()).zip(z2.iter()) {
        *o = Complex64::new((a.re * a.im + b.re * b.im) * scale, 0.0);
    }
    g.fft2_with(out, false, fft);
    for (c, &keep) in out.iter_mut().zip(mask) {
        if !keep {
            *c = Complex64::default();
        }
    }
}
