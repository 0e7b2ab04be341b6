use aqg_core::diagnostics::sobolev_norm;
use aqg_core::oracle::{sample_field, FieldSampler, Normalization};
use aqg_core::solver::{run, step_ifrk4, DtPolicy, SolverConfig};
use aqg_core::spectral::{Grid, SpectralField};
use aqg_core::AnisotropyParams;

fn strong_field(n: usize, seed: u64, amplitude: f64) -> SpectralField {
    let g = Grid::square(n).unwrap();
    sample_field(&FieldSampler::new(g, 4, seed, Normalization::UnitL2).unwrap()).scaled(amplitude)
}

/// `m` steps of size `h/m`.
fn substeps(theta: &SpectralField, h: f64, m: usize, p: &AnisotropyParams) -> SpectralField {
    (0..m).fold(theta.clone(), |th, _| {
        step_ifrk4(&th, h / m as f64, p).unwrap()
    })
}

fn l2_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    sobolev_norm(&a.axpy(-1.0, b).unwrap(), 0.0, false)
}

#[test]
fn one_step_error_has_local_order_five() {
    let p = AnisotropyParams::new(0.6, 0.8, 0.5, 0.5).unwrap();
    for seed in 0..3 {
        let theta = strong_field(32, seed, 30.0);
        let errs: Vec<f64> = [0.01, 0.005, 0.0025]
            .iter()
            .map(|&h| {
                l2_diff(
                    &step_ifrk4(&theta, h, &p).unwrap(),
                    &substeps(&theta, h, 32, &p),
                )
            })
            .collect();
        let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
        // pre-asymptotic at the largest step, then close to 2⁵
        assert!(ratios[1] > ratios[0], "seed {seed}: {ratios:?}");
        assert!(
            (28.0..=36.0).contains(&ratios[1]),
            "seed {seed}: {ratios:?}"
        );
    }
}

#[test]
fn global_error_has_order_four() {
    let p = AnisotropyParams::new(0.6, 0.8, 0.5, 0.5).unwrap();
    let theta = strong_field(32, 5, 30.0);
    let t = 0.2;
    let reference = substeps(&theta, t, 640, &p);
    let errs: Vec<f64> = [20, 40, 80]
        .iter()
        .map(|&m| l2_diff(&substeps(&theta, t, m, &p), &reference))
        .collect();
    let ratio = errs[1] / errs[2];
    assert!((14.0..=18.0).contains(&ratio), "{errs:?}");
}

#[test]
fn refinement_changes_norms_little() {
    let p = AnisotropyParams::new(0.75, 0.75, 1.0, 1.0).unwrap();
    let final_norms = |n: usize, dt: f64| {
        let g = Grid::square(n).unwrap();
        let theta =
            aqg_core::spectral::PhysicalField::from_fn(g, |x1, x2| x1.sin() * x2.sin() + x2.cos())
                .to_spectral();
        let traj = run(&theta, &SolverConfig::new(p, 1.0, DtPolicy::Fixed(dt))).unwrap();
        [0.0, 1.0, 2.0].map(|s| sobolev_norm(&traj.final_state, s, false))
    };
    let coarse = final_norms(32, 0.01);
    let fine = final_norms(64, 0.005);
    for (c, f) in coarse.iter().zip(&fine) {
        assert!((c - f).abs() <= 1e-6 * f, "{coarse:?} vs {fine:?}");
    }
}
