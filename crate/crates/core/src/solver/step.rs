use std::sync::Arc;

use num_complex::Complex64;

use crate::diagnostics::DissipationWeights;
use crate::params::AnisotropyParams;
use crate::spectral::{
    advection_into, advection_term, AdvectionWork, Grid, PhysicalField, SpectralField,
};

use super::propagator::linear_symbols;
use super::{DtPolicy, LinearPropagator, SolverError};

/// Floor on the velocity magnitude in the CFL formula.
pub const CFL_EPS: f64 = 1e-12;

/// Nonlinear part of the right-hand side, `−u_θ·∇θ`.
pub fn rhs_nonlinear(theta: &SpectralField) -> SpectralField {
    advection_term(theta).scaled(-1.0)
}

/// One integrating-factor RK4 step of size `dt`.
pub fn step_ifrk4(
    theta: &SpectralField,
    dt: f64,
    params: &AnisotropyParams,
) -> Result<SpectralField, SolverError> {
    Stepper::new(theta.grid(), params)
        .step(theta, dt, None)
        .map(|(f, _)| f)
}

/// Advective time step `min(dt_max, c·min(Δx₁,Δx₂)/max(‖u‖_∞, ε))`, or the
/// fixed step. `‖u‖_∞` is the largest pointwise velocity magnitude.
pub fn adapt_dt(u1: &PhysicalField, u2: &PhysicalField, grid: &Grid, policy: DtPolicy) -> f64 {
    match policy {
        DtPolicy::Fixed(dt) => dt,
        DtPolicy::Cfl { c, dt_max } => {
            let umax = u1
                .values()
                .iter()
                .zip(u2.values())
                .fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)));
            let dx = grid.dx1().min(grid.dx2());
            dt_max.min(c * dx / umax.max(CFL_EPS))
        }
    }
}

/// Beyond this exponent the stage weights are applied in log form.
const WEIGHT_EXP_LIMIT: f64 = 600.0;

/// `∫₀¹ e^{−xu} u^m du` for `m = 0, 1, 2`.
fn exp_moments(x: f64) -> [f64; 3] {
    if x < 0.5 {
        let mut out = [0.0; 3];
        for (m, o) in out.iter_mut().enumerate() {
            let mut term = 1.0;
            for j in 0..24 {
                *o += term / (m + j + 1) as f64;
                term *= -x / (j + 1) as f64;
            }
        }
        out
    } else {
        let e = (-x).exp();
        [
            (1.0 - e) / x,
            (1.0 - (1.0 + x) * e) / (x * x),
            (2.0 - (2.0 + 2.0 * x + x * x) * e) / (x * x * x),
        ]
    }
}

/// Per-mode quadrature for `∫₀^h |θ̂(τ)|² dτ` from the four RK stages.
///
/// Writes `|θ̂(τ)|² = e^{−2λτ}p(τ)` and integrates the quadratic through
/// `p(0)`, the mean of the two midpoint stages and `p(h)` exactly against
/// the exponential. Pure linear decay is integrated without error; with
/// `λ = 0` the rule reduces to the classical RK4 weights `h/6 (1, 4, 1)`.
#[derive(Debug, Clone)]
struct StageWeights {
    dt: f64,
    /// `(w0, wm, w1, x)`; `wm` and `w1` omit the growth factors `e^{x/2}`,
    /// `e^{x}` when `x` exceeds [`WEIGHT_EXP_LIMIT`].
    modes: Vec<(f64, f64, f64, f64)>,
}

impl StageWeights {
    fn new(symbols: &[f64], h: f64) -> Self {
        let modes = symbols
            .iter()
            .map(|&lam| {
                let x = 2.0 * lam * h;
                let [m0, m1, m2] = exp_moments(x);
                let w0 = h * (m0 - 3.0 * m1 + 2.0 * m2);
                let wm = h * 4.0 * (m1 - m2);
                let w1 = h * (2.0 * m2 - m1);
                if x <= WEIGHT_EXP_LIMIT {
                    (w0, wm * (0.5 * x).exp(), w1 * x.exp(), x)
                } else {
                    (w0, wm, w1, x)
                }
            })
            .collect();
        Self { dt: h, modes }
    }

    /// Integral estimate for one mode from `|θ|²` at the start, the two
    /// midpoint stages and the end stage.
    #[inline]
    fn integrate(&self, k: usize, s0: f64, sa: f64, sb: f64, sc: f64) -> f64 {
        let (w0, wm, w1, x) = self.modes[k];
        let mid = 0.5 * (sa + sb);
        if x <= WEIGHT_EXP_LIMIT {
            w0 * s0 + wm * mid + w1 * sc
        } else {
            let grow = |w: f64, v: f64, g: f64| if v > 0.0 { w * (v.ln() + g).exp() } else { 0.0 };
            w0 * s0 + grow(wm, mid, 0.5 * x) + grow(w1, sc, x)
        }
    }
}

/// Reusable IFRK4 stepper: keeps the linear symbol table, the propagators
/// and budget weights for the last step size, and all stage buffers.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Arc<Grid>,
    symbols: Vec<f64>,
    cached: Option<(LinearPropagator, LinearPropagator)>,
    quad: Option<StageWeights>,
    work: AdvectionWork,
    stages: [Vec<Complex64>; 3],
    k: [Vec<Complex64>; 4],
}

impl Stepper {
    pub fn new(grid: &Arc<Grid>, params: &AnisotropyParams) -> Self {
        let zero = || vec![Complex64::default(); grid.len()];
        Self {
            grid: grid.clone(),
            symbols: linear_symbols(grid, params),
            cached: None,
            quad: None,
            work: AdvectionWork::default(),
            stages: [zero(), zero(), zero()],
            k: [zero(), zero(), zero(), zero()],
        }
    }

    fn ensure_propagators(&mut self, dt: f64) {
        if self.cached.as_ref().map(|c| c.0.dt()) != Some(dt) {
            let full = LinearPropagator::from_symbols(self.grid.clone(), &self.symbols, dt);
            let half = LinearPropagator::from_symbols(self.grid.clone(), &self.symbols, 0.5 * dt);
            self.cached = Some((full, half));
        }
    }

    /// Advances `theta` by `dt`. When `weights` is given, also returns the
    /// increments of both dissipation integrands over the step, integrated
    /// from the stage states with weights exact for the linear decay.
    pub fn step(
        &mut self,
        theta: &SpectralField,
        dt: f64,
        weights: Option<&DissipationWeights>,
    ) -> Result<(SpectralField, (f64, f64)), SolverError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(SolverError::BadStep(dt));
        }
        self.ensure_propagators(dt);
        let Self {
            grid,
            cached,
            work,
            stages,
            k,
            ..
        } = self;
        let (full, half) = cached.as_ref().expect("propagators built above");
        let (e, e2) = (full.factors(), half.factors());
        let h = dt;
        let th = theta.coeffs();
        let [a, b, c] = stages;
        let [k1, k2, k3, k4] = k;

        // k_i hold the advection term; the right-hand side is its negative
        advection_into(grid, th, work, k1);
        for i in 0..th.len() {
            a[i] = (th[i] - k1[i] * (0.5 * h)) * e2[i];
        }
        advection_into(grid, a, work, k2);
        for i in 0..th.len() {
            b[i] = th[i] * e2[i] - k2[i] * (0.5 * h);
        }
        advection_into(grid, b, work, k3);
        for i in 0..th.len() {
            c[i] = th[i] * e[i] - k3[i] * (h * e2[i]);
        }
        advection_into(grid, c, work, k4);

        // θ' = Eθ + h/6 (E k1 + 2 E2 (k2 + k3) + k4) with k = −advection
        let out: Vec<Complex64> = (0..th.len())
            .map(|i| {
                let mid = (k2[i] + k3[i]) * (2.0 * e2[i]);
                th[i] * e[i] - (k1[i] * e[i] + mid + k4[i]) * (h / 6.0)
            })
            .collect();
        if out.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(SolverError::BlowUp(f64::NAN));
        }

        let budget = match weights {
            Some(w) => {
                if self.quad.as_ref().map(|q| q.dt) != Some(dt) {
                    self.quad = Some(StageWeights::new(&self.symbols, dt));
                }
                let quad = self.quad.as_ref().expect("set above");
                let (w1, w2) = w.parts();
                let [a, b, c] = &self.stages;
                let (mut d1, mut d2) = (0.0, 0.0);
                for i in 0..th.len() {
                    if w1[i] == 0.0 && w2[i] == 0.0 {
                        continue;
                    }
                    let v = quad.integrate(
                        i,
                        th[i].norm_sqr(),
                        a[i].norm_sqr(),
                        b[i].norm_sqr(),
                        c[i].norm_sqr(),
                    );
                    d1 += w1[i] * v;
                    d2 += w2[i] * v;
                }
                (d1.max(0.0), d2.max(0.0))
            }
            None => (0.0, 0.0),
        };
        let out = SpectralField::new(self.grid.clone(), out).expect("grid-sized buffer");
        Ok((out, budget))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::riesz_velocity;
    use std::f64::consts::PI;

    fn cos_x1(n: usize) -> SpectralField {
        let g = Grid::square(n).unwrap();
        PhysicalField::from_fn(g, |x1, _| x1.cos()).to_spectral()
    }

    #[test]
    fn pure_decay_step_is_exact() {
        let theta = cos_x1(16);
        for nu in [0.3, 1.0, 7.0] {
            let p = AnisotropyParams::new(0.5, 0.3, 1.0, nu).unwrap();
            let next = step_ifrk4(&theta, 0.1, &p).unwrap();
            let want = theta.scaled((-0.1f64).exp());
            for (a, b) in next.coeffs().iter().zip(want.coeffs()) {
                assert!((a - b).norm() < 1e-12 * theta.max_coeff());
            }
        }
    }

    #[test]
    fn zero_stays_zero() {
        let g = Grid::square(16).unwrap();
        let p = AnisotropyParams::new(0.5, 0.5, 1.0, 1.0).unwrap();
        let z = SpectralField::zeros(g);
        assert_eq!(step_ifrk4(&z, 0.1, &p).unwrap().max_coeff(), 0.0);
        assert!(step_ifrk4(&z, -0.1, &p).is_err());
    }

    #[test]
    fn nonlinear_rhs_sign() {
        let g = Grid::square(32).unwrap();
        let theta =
            PhysicalField::from_fn(g.clone(), |x1, x2| x1.cos() + (2.0 * x2).cos()).to_spectral();
        let adv = advection_term(&theta);
        let rhs = rhs_nonlinear(&theta);
        for (a, b) in adv.coeffs().iter().zip(rhs.coeffs()) {
            assert_eq!(*a, -*b);
        }
        assert!(rhs_nonlinear(&cos_x1(16)).max_coeff() < 1e-10);
    }

    #[test]
    fn cfl_examples() {
        let g = Grid::square(64).unwrap();
        let zero = PhysicalField::zeros(g.clone());
        let pol = DtPolicy::Cfl {
            c: 0.5,
            dt_max: 0.2,
        };
        assert_eq!(adapt_dt(&zero, &zero, &g, pol), 0.2);
        // u = (0, −sin x₁) has ‖u‖_∞ = 1 on a 64-point grid
        let (u1, u2) = riesz_velocity(&cos_x1(64));
        let dt = adapt_dt(&u1.to_physical(), &u2.to_physical(), &g, pol);
        assert!((dt - 0.5 * 2.0 * PI / 64.0).abs() < 1e-14);
        assert_eq!(
            adapt_dt(&zero, &u2.to_physical(), &g, DtPolicy::Fixed(1e-3)),
            1e-3
        );
    }

    #[test]
    fn stage_budget_on_pure_decay_matches_closed_form() {
        // single mode: integrand e^{-2t}·w, integral over [0,h] = w(1-e^{-2h})/2
        let theta = cos_x1(16);
        let g = theta.grid().clone();
        let p = AnisotropyParams::new(0.5, 0.5, 1.0, 1.0).unwrap();
        let w = DissipationWeights::new(&g, 0.5, 0.5, 0.0);
        let w0 = w.integrands(&theta).0;
        let mut st = Stepper::new(&g, &p);
        let h = 0.05;
        let (_, (d1, d2)) = st.step(&theta, h, Some(&w)).unwrap();
        let exact = w0 * (1.0 - (-2.0 * h).exp()) / 2.0;
        assert!((d1 - exact).abs() < 1e-13 * exact, "{d1} vs {exact}");
        assert_eq!(d2, 0.0);
    }

    #[test]
    fn moments_series_and_closed_form_agree() {
        for x in [0.0, 1e-8, 0.1, 0.49, 0.5, 0.51, 3.0, 50.0] {
            let m = exp_moments(x);
            // direct composite Simpson on a fine grid as the reference
            let n = 20_000;
            for (p, got) in m.iter().enumerate() {
                let f = |u: f64| (-x * u).exp() * u.powi(p as i32);
                let hh = 1.0 / n as f64;
                let mut acc = f(0.0) + f(1.0);
                for j in 1..n {
                    acc += f(j as f64 * hh) * if j % 2 == 1 { 4.0 } else { 2.0 };
                }
                let want = acc * hh / 3.0;
                assert!((got - want).abs() < 1e-12 * want.max(1e-3), "x={x} m={p}");
            }
        }
    }

    #[test]
    fn stage_weights_reduce_to_rk4_without_damping() {
        let q = StageWeights::new(&[0.0], 0.3);
        let (w0, wm, w1, _) = q.modes[0];
        assert!((w0 - 0.05).abs() < 1e-15);
        assert!((wm - 0.2).abs() < 1e-15);
        assert!((w1 - 0.05).abs() < 1e-15);
    }

    #[test]
    fn stiff_mode_budget_is_exact() {
        // heavily damped modes (the last one past the log-form cutoff) integrate to |θ₀|²(1 − e^{−x})/(2λ)
        for lam in [10.0, 400.0, 3_400.0] {
            let h = 0.1;
            let q = StageWeights::new(&[lam], h);
            let s0 = 2.0;
            let sa = s0 * (-lam * h).exp();
            let sc = s0 * (-2.0 * lam * h).exp();
            let got = q.integrate(0, s0, sa, sa, sc);
            let want = s0 * (1.0 - (-2.0 * lam * h).exp()) / (2.0 * lam);
            assert!(
                (got - want).abs() < 1e-12 * want,
                "lam={lam}: {got} vs {want}"
            );
        }
    }
}
