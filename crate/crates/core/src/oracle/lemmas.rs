use rayon::prelude::*;

use crate::diagnostics::{aniso_sobolev_norm, lp_norm, sobolev_norm};
use crate::spectral::{
    apply_isotropic_fractional, riesz_velocity, Axis, PhysicalField, SpectralField,
};

use super::{sample_field, FieldSampler, OracleError, OracleReport};

/// Allowed rounding excess in the interpolation check.
pub const INTERPOLATION_TOL: f64 = 1e-12;
/// Allowed rounding excess of the `L²` Riesz ratio over 1.
pub const PLANCHEREL_TOL: f64 = 1e-10;
/// Allowed rounding excess of `ln x − x^α/(αe)` over 0.
pub const LN_BOUND_TOL: f64 = 1e-12;
/// Empirical constants may grow at most by this factor when the sample
/// count doubles.
pub const STABILITY_GROWTH: f64 = 1.2;

/// Ratio of the two sides of
///
/// ```text
/// ‖|∂ᵢ|^{z s₁ + (1−z) s₂} f‖_X ≤ ‖|∂ᵢ|^{s₁} f‖_X^z · ‖|∂ᵢ|^{s₂} f‖_X^{1−z}
/// ```
///
/// with `X = Hˢ` or `Ḣˢ` (same index on both sides). This is Hölder's
/// inequality on the discrete spectral measure, so the ratio never exceeds
/// one beyond rounding. A zero left side gives 0.
pub fn check_interpolation(
    f: &SpectralField,
    axis: Axis,
    s: f64,
    s1: f64,
    s2: f64,
    z: f64,
    homogeneous: bool,
) -> Result<f64, OracleError> {
    if !(0.0..=1.0).contains(&z) {
        return Err(OracleError::BadWeight(z));
    }
    if !(s1 >= 0.0 && s2 >= 0.0) {
        return Err(OracleError::Invalid(format!(
            "powers must be non-negative, got {s1}, {s2}"
        )));
    }
    let norm = |p: f64| {
        aniso_sobolev_norm(f, axis, p, s, homogeneous)
            .map_err(|e| OracleError::Invalid(e.to_string()))
    };
    let lhs = norm(z * s1 + (1.0 - z) * s2)?;
    if lhs == 0.0 {
        return Ok(0.0);
    }
    let rhs = norm(s1)?.powf(z) * norm(s2)?.powf(1.0 - z);
    Ok(if rhs == 0.0 { f64::INFINITY } else { lhs / rhs })
}

/// `(∫ |u|^p)^{1/p}` of the vector field `(u₁, u₂)`; `p = ∞` gives the
/// largest pointwise magnitude.
pub fn vector_lp_norm(u1: &PhysicalField, u2: &PhysicalField, p: f64) -> f64 {
    let mags = u1
        .values()
        .iter()
        .zip(u2.values())
        .map(|(a, b)| a.hypot(*b));
    if p.is_infinite() {
        return mags.fold(0.0, f64::max);
    }
    let mags: Vec<f64> = mags.collect();
    let m = mags.iter().copied().fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = mags.iter().map(|v| (v / m).powf(p)).sum();
    m * (s * u1.grid().cell_area()).powf(1.0 / p)
}

/// `‖R^⊥θ‖_{L^p} / ‖θ‖_{L^p}` (0 for the zero field).
pub fn riesz_lp_ratio(theta: &SpectralField, p: f64) -> Result<f64, OracleError> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(OracleError::BadExponent(p));
    }
    let (u1, u2) = riesz_velocity(theta);
    let num = vector_lp_norm(&u1.to_physical(), &u2.to_physical(), p);
    let phys = theta.to_physical();
    let den = if p >= 2.0 {
        lp_norm(&phys, p).map_err(|e| OracleError::Invalid(e.to_string()))?
    } else {
        let zero = PhysicalField::zeros(phys.grid().clone());
        vector_lp_norm(&phys, &zero, p)
    };
    Ok(if den == 0.0 { 0.0 } else { num / den })
}

/// Largest `‖R^⊥θ‖_p/‖θ‖_p` over `n_samples` fields drawn with seeds
/// `seed, seed+1, …`.
///
/// Violations count non-finite ratios, ratios above `1 + PLANCHEREL_TOL`
/// when `p = 2`, and one more if the maximum over all samples exceeds
/// [`STABILITY_GROWTH`] times the maximum over the first half.
pub fn estimate_riesz_lp_constant(
    p: f64,
    sampler: &FieldSampler,
    n_samples: usize,
) -> Result<OracleReport, OracleError> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(OracleError::BadExponent(p));
    }
    if n_samples < 2 {
        return Err(OracleError::NoSamples);
    }
    let ratios: Vec<f64> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let f = sample_field(&sampler.with_seed(sampler.seed().wrapping_add(i)));
            riesz_lp_ratio(&f, p).unwrap_or(f64::NAN)
        })
        .collect();
    let (worst, max_all) = argmax(&ratios);
    let (_, max_half) = argmax(&ratios[..n_samples / 2]);
    let mut violations = ratios.iter().filter(|r| !r.is_finite()).count();
    if p == 2.0 {
        violations += ratios.iter().filter(|&&r| r > 1.0 + PLANCHEREL_TOL).count();
    }
    if max_all > STABILITY_GROWTH * max_half {
        violations += 1;
    }
    Ok(OracleReport {
        lemma: "lemma2".into(),
        params: format!(
            "p={p};kmax={};n1={};n2={}",
            sampler.kmax(),
            sampler.grid().n1(),
            sampler.grid().n2()
        ),
        samples: n_samples,
        max_ratio: max_all,
        violations,
        worst_case_seed: sampler.seed().wrapping_add(worst as u64),
    })
}

/// Index and value of the largest entry; NaN counts as largest.
pub(crate) fn argmax(v: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &x) in v.iter().enumerate() {
        if x.is_nan() {
            return (i, f64::NAN);
        }
        if x > best.1 {
            best = (i, x);
        }
    }
    best
}

/// Sides of the logarithmic bound on the Riesz velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSobolev {
    /// `‖R^⊥f‖_{L^∞}`.
    pub lhs: f64,
    /// `1 + ‖f‖_{L²} + ‖f‖_{L^∞} ln(e + ‖|∇|^σ f‖_{L²})`.
    pub rhs_shape: f64,
    pub ratio: f64,
}

pub fn check_log_sobolev(f: &SpectralField, sigma: f64) -> Result<LogSobolev, OracleError> {
    if !(sigma > 1.0 && sigma.is_finite()) {
        return Err(OracleError::BadSigma(sigma));
    }
    let (u1, u2) = riesz_velocity(f);
    let lhs = vector_lp_norm(&u1.to_physical(), &u2.to_physical(), f64::INFINITY);
    let phys = f.to_physical();
    let l2 = sobolev_norm(f, 0.0, false);
    let linf = phys.max_abs();
    let grad =
        apply_isotropic_fractional(f, sigma).map_err(|e| OracleError::Invalid(e.to_string()))?;
    let hsig = sobolev_norm(&grad, 0.0, false);
    let rhs_shape = 1.0 + l2 + linf * (std::f64::consts::E + hsig).ln();
    Ok(LogSobolev {
        lhs,
        rhs_shape,
        ratio: lhs / rhs_shape,
    })
}

/// Sharp constant in `ln x ≤ C(α) x^α` on `x ≥ 1`: `1/(αe)`, attained at
/// `x = e^{1/α}`.
pub fn sharp_ln_constant(alpha: f64) -> f64 {
    1.0 / (alpha * std::f64::consts::E)
}

/// Largest `ln x − x^α/(αe)` over `n_points` log-spaced `x ∈ [1, 10¹²]`.
pub fn check_ln_bound(alpha: f64, n_points: usize) -> Result<f64, OracleError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(OracleError::Invalid(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if n_points < 2 {
        return Err(OracleError::NoSamples);
    }
    let c = sharp_ln_constant(alpha);
    let top = 12.0 * std::f64::consts::LN_10;
    Ok((0..n_points)
        .map(|j| {
            let lx = top * j as f64 / (n_points - 1) as f64;
            lx - c * (alpha * lx).exp()
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Normalization;
    use crate::spectral::Grid;
    use std::f64::consts::{E, PI};

    fn field(n: usize, f: impl Fn(f64, f64) -> f64) -> SpectralField {
        PhysicalField::from_fn(Grid::square(n).unwrap(), f).to_spectral()
    }

    #[test]
    fn interpolation_degenerate_weight() {
        let f = field(16, |x1, x2| {
            (x1 + 0.3).sin() * (2.0 * x2).cos() + (3.0 * x1).cos()
        });
        for hom in [false, true] {
            let r = check_interpolation(&f, Axis::X1, 1.3, 0.7, 2.1, 1.0, hom).unwrap();
            assert_eq!(r, 1.0);
        }
    }

    #[test]
    fn interpolation_single_atom_equality() {
        let f = field(16, |x1, x2| (2.0 * x1 + x2).cos());
        for (axis, s1, s2, z) in [(Axis::X1, 0.3, 2.0, 0.4), (Axis::X2, 1.7, 0.0, 0.9)] {
            let r = check_interpolation(&f, axis, 1.5, s1, s2, z, false).unwrap();
            assert!((r - 1.0).abs() < 1e-14, "{r}");
        }
    }

    #[test]
    fn interpolation_two_atoms_strict() {
        let f = field(16, |x1, _| x1.cos() + (3.0 * x1).cos());
        let r = check_interpolation(&f, Axis::X1, 0.0, 0.0, 2.0, 0.5, false).unwrap();
        // equal masses at |ξ₁| = 1, 3: sqrt((1+9) / sqrt(2·(1+81)))
        let want = (10.0 / 164f64.sqrt()).sqrt();
        assert!((r - want).abs() < 1e-13);
        assert!(r < 1.0);
    }

    #[test]
    fn interpolation_edge_cases() {
        let g = Grid::square(8).unwrap();
        let z = SpectralField::zeros(g);
        assert_eq!(
            check_interpolation(&z, Axis::X1, 0.0, 1.0, 2.0, 0.5, true).unwrap(),
            0.0
        );
        let f = field(8, |x1, _| x1.cos());
        assert!(check_interpolation(&f, Axis::X1, 0.0, 1.0, 2.0, 1.5, true).is_err());
        assert!(check_interpolation(&f, Axis::X1, 0.0, -1.0, 2.0, 0.5, true).is_err());
    }

    #[test]
    fn riesz_single_mode_ratios() {
        let f = field(32, |x1, _| x1.cos());
        assert!((riesz_lp_ratio(&f, 2.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((riesz_lp_ratio(&f, 4.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(riesz_lp_ratio(&f, 1.0).is_err());
        assert!(riesz_lp_ratio(&f, f64::INFINITY).is_err());
    }

    #[test]
    fn riesz_l2_report() {
        let s = FieldSampler::new(Grid::square(32).unwrap(), 10, 7, Normalization::UnitL2).unwrap();
        let rep = estimate_riesz_lp_constant(2.0, &s, 40).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.max_ratio <= 1.0 + PLANCHEREL_TOL);
        assert!(rep.worst_case_seed >= 7 && rep.worst_case_seed < 47);
        let again = riesz_lp_ratio(&sample_field(&s.with_seed(rep.worst_case_seed)), 2.0).unwrap();
        assert_eq!(again, rep.max_ratio);
    }

    #[test]
    fn log_sobolev_examples() {
        let g = Grid::square(16).unwrap();
        let z = check_log_sobolev(&SpectralField::zeros(g), 1.5).unwrap();
        assert_eq!((z.lhs, z.rhs_shape, z.ratio), (0.0, 1.0, 0.0));

        let f = field(32, |x1, _| x1.cos());
        let r = check_log_sobolev(&f, 1.5).unwrap();
        let l2 = PI * 2f64.sqrt();
        assert!((r.lhs - 1.0).abs() < 1e-14);
        assert!((r.rhs_shape - (1.0 + l2 + (E + l2).ln())).abs() < 1e-12);

        let big = check_log_sobolev(&f.scaled(10.0), 1.5).unwrap();
        assert!((big.lhs - 10.0 * r.lhs).abs() < 1e-12);
        assert!(big.rhs_shape < 10.0 * r.rhs_shape * (E + 10.0 * l2).ln());
        assert!(big.ratio >= r.ratio / 10.0);
        assert!(check_log_sobolev(&f, 1.0).is_err());
    }

    #[test]
    fn ln_bound_examples() {
        assert!((sharp_ln_constant(1.0) - 1.0 / E).abs() < 1e-16);
        // equality at x = e for α = 1
        assert!((1.0 - sharp_ln_constant(1.0) * E).abs() < 1e-15);
        // equality at x = e² for α = ½
        assert!((2.0 - sharp_ln_constant(0.5) * E).abs() < 1e-15);
        for a in [0.1, 0.5, 1.0, 2.0] {
            let gap = check_ln_bound(a, 20_001).unwrap();
            assert!(gap <= LN_BOUND_TOL, "alpha {a}: {gap}");
            // x = 1 is on the grid with gap −C(α)
            assert!(gap >= -sharp_ln_constant(a));
        }
        assert!(check_ln_bound(0.0, 10).is_err());
    }
}
