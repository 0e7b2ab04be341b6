//! The `(α, β)` global-regularity threshold and the exponent `ρ` attached
//! to it.

use super::DiagnosticsError;

/// Points within this distance of the threshold count as on the boundary,
/// and the boundary is excluded.
pub const BOUNDARY_TOL: f64 = 1e-12;

fn check_range(alpha: f64, beta: f64) -> Result<(), DiagnosticsError> {
    let ok = |x: f64| x > 0.0 && x < 1.0;
    if ok(alpha) && ok(beta) {
        Ok(())
    } else {
        Err(DiagnosticsError::OutOfRange(alpha, beta))
    }
}

/// Lower bound on `β`: `1/(2α+1)` for `α ≤ ½`, `(1−α)/(2α)` above.
pub fn regularity_threshold(alpha: f64) -> f64 {
    if alpha <= 0.5 {
        1.0 / (2.0 * alpha + 1.0)
    } else {
        (1.0 - alpha) / (2.0 * alpha)
    }
}

/// Whether `β` strictly exceeds [`regularity_threshold`]`(α)`.
pub fn condition_global(alpha: f64, beta: f64) -> Result<bool, DiagnosticsError> {
    check_range(alpha, beta)?;
    Ok(beta - regularity_threshold(alpha) > BOUNDARY_TOL)
}

/// The exponent `ρ > 1`:
///
/// ```text
/// ρ = 2β / ((2α+1)β − 1)                              α ≤ ½
/// ρ = max{ 2α/(2α−1), 2α/((2β+1)α − 1) }              α > ½
/// ```
pub fn rho_exponent(alpha: f64, beta: f64) -> Result<f64, DiagnosticsError> {
    if !condition_global(alpha, beta)? {
        return Err(DiagnosticsError::OutsideRegime(alpha, beta));
    }
    Ok(if alpha <= 0.5 {
        2.0 * beta / ((2.0 * alpha + 1.0) * beta - 1.0)
    } else {
        let a = 2.0 * alpha / (2.0 * alpha - 1.0);
        let b = 2.0 * alpha / ((2.0 * beta + 1.0) * alpha - 1.0);
        a.max(b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_examples() {
        assert!(condition_global(0.5, 0.6).unwrap());
        assert!(!condition_global(0.25, 0.5).unwrap());
        assert!(!condition_global(0.75, 1.0 / 6.0).unwrap());
        assert!(condition_global(0.75, 1.0 / 6.0 + 1e-9).unwrap());
        // α = ½ sits exactly on the threshold β = ½ from either branch
        assert!(!condition_global(0.5, 0.5).unwrap());
        assert!(condition_global(1.5, 0.5).is_err());
        assert!(condition_global(0.5, 0.0).is_err());
    }

    #[test]
    fn threshold_continuous_at_half() {
        let left = 1.0 / (2.0 * 0.5 + 1.0);
        let right = (1.0 - 0.5) / (2.0 * 0.5);
        assert_eq!(left, right);
        assert_eq!(regularity_threshold(0.5), 0.5);
    }

    #[test]
    fn rho_examples() {
        assert!((rho_exponent(0.4, 0.8).unwrap() - 1.6 / 0.44).abs() < 1e-12);
        assert!((rho_exponent(0.75, 0.75).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(
            rho_exponent(0.25, 0.5),
            Err(DiagnosticsError::OutsideRegime(0.25, 0.5))
        );
    }

    #[test]
    fn rho_exceeds_one_on_scan() {
        let mut checked = 0;
        for i in 1..=50 {
            for j in 1..=50 {
                let (a, b) = (i as f64 / 51.0, j as f64 / 51.0);
                if condition_global(a, b).unwrap() {
                    let rho = rho_exponent(a, b).unwrap();
                    assert!(rho > 1.0 && rho.is_finite(), "rho({a},{b}) = {rho}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 1000);
    }
}
