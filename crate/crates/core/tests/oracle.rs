use kysmooth::dirac::{build_algebra, random_spinor, C64};
use kysmooth::funk_hecke::{mu_k, Dispersion, Smoothing, SmoothingProblem};
use kysmooth::optimize::{sup_over_k_and_r, Equation, SearchOptions};
use kysmooth::oracle::*;
use kysmooth::weights::WeightSpec;
use kysmooth::Error;
use nalgebra::{Complex, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_suite(s: Suite) {
    let r = run_suite(s, 11, None);
    let bad: Vec<_> = r.failures().collect();
    assert!(r.passed, "{s}: {bad:#?}");
}

#[test]
fn funk_hecke_suite() {
    assert_suite(Suite::FunkHecke);
}

#[test]
fn closed_form_suite() {
    assert_suite(Suite::ClosedForm);
}

#[test]
fn decomposition_suite() {
    assert_suite(Suite::Decomposition1d);
}

#[test]
fn small_suites() {
    for s in [Suite::Dirac1d, Suite::Quadrature, Suite::Legendre, Suite::Algebra, Suite::Propagator, Suite::ScaleCovariance] {
        assert_suite(s);
    }
}

#[test]
fn extremiser_suite() {
    assert_suite(Suite::Extremiser);
}

#[test]
fn suite_reports_are_deterministic() {
    let a = run_suite(Suite::FunkHecke, 5, None).to_json();
    let b = run_suite(Suite::FunkHecke, 5, None).to_json();
    assert_eq!(a, b);
    assert_eq!(a["schema"], VERIFY_SCHEMA);
    assert_eq!(a["suite"], "funk-hecke");
    assert!("nope".parse::<Suite>().is_err());
    assert_eq!(Suite::parse_list("all").unwrap().len(), Suite::ALL.len());
}

#[test]
fn tolerance_override_applies() {
    let r = run_suite(Suite::Legendre, 0, Some(0.0));
    assert!(r.checks.iter().all(|c| c.tolerance == 0.0));
}

#[test]
fn empty_level_set_is_an_error() {
    let p = SmoothingProblem::new(1, WeightSpec::exponential(1, 1.0).unwrap(), Smoothing::One, Dispersion::Schrodinger).unwrap();
    let rep = sup_over_k_and_r(&p, Equation::Schrodinger, &SearchOptions { points: 64, ..Default::default() }).unwrap();
    assert!(rep.sup_value.is_none());
    assert!(matches!(build_near_extremiser(&p, &rep), Err(Error::EmptyLevelSet(_))));
}

#[test]
fn dirac_extremiser_on_top_branch() {
    let p = SmoothingProblem::new(
        1,
        WeightSpec::gaussian(1, 1.0).unwrap(),
        Smoothing::PowExp { p: 1.0, b: 0.5 },
        Dispersion::Relativistic { m: 1.0 },
    )
    .unwrap();
    let rep = sup_over_k_and_r(&p, Equation::Dirac, &SearchOptions { eps_rel: 0.01, ..Default::default() }).unwrap();
    let e = build_near_extremiser(&p, &rep).unwrap();
    assert!(e.check.ratio >= 0.99);
    assert!((e.profile.l2_norm_sq() - 1.0).abs() < 1e-3);
    // gaussian F_w > 0: (βf₀, αf₁) ∝ (m + φ, 0, r, 0) up to the second basis vector
    let alg = build_algebra(1).unwrap();
    let i = e.profile.r_grid.len() / 2;
    let r = e.profile.r_grid[i];
    let p0 = &alg.beta * &e.profile.f0[i];
    let s0 = &alg.alphas[0] * &e.profile.f1.as_ref().unwrap()[i];
    let phi = r.hypot(1.0);
    assert!((p0[0].re / s0[0].re - (1.0 + phi) / r).abs() < 1e-12);
    assert!(p0[1].norm() < 1e-15 && s0[1].norm() < 1e-15);
    let mut csv = Vec::new();
    e.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("r,f0_0_re,f0_0_im,f0_1_re"));
    assert_eq!(text.lines().count(), 402);
    assert_eq!(e.to_json()["schema"], EXTREMISER_SCHEMA);
}

#[test]
fn spacetime_rejects_non_decaying_time_integral() {
    let p = SmoothingProblem::new(1, WeightSpec::exponential(1, 1.0).unwrap(), Smoothing::One, Dispersion::Schrodinger).unwrap();
    let b = Bump::new(1.0, 0.5).unwrap();
    let f = move |r: f64| DVector::from_element(1, Complex::new(b.eval(r), 0.0));
    let prof = Profile1D { support: b.support(), f0: &f, f1: &f };
    let opts = SpaceTimeOptions { rel_tol: 1e-12, t_limit: 40.0, ..Default::default() };
    assert!(matches!(smoothing_norm_1d_schrodinger(&p, &prof, &opts), Err(Error::Quadrature { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bruteforce_matches_multiplier(seed in 0u64..1000, d in 2usize..4, k in 0u32..5, rho in 0.5f64..2.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_harmonic(d, k, &mut rng).unwrap();
        let omega = random_direction(d, &mut rng);
        let f = |t: f64| (-rho * rho * (1.0 - t)).exp();
        let brute = funk_hecke_bruteforce(d, f, &p, &omega).unwrap();
        let want = mu_k(d, k as usize, f).unwrap() * p.eval(&omega);
        let scale = mu_k(d, 0, f).unwrap() * p.max_coeff();
        prop_assert!((brute - want).abs() <= 1e-9 * scale);
    }

    #[test]
    fn dirac_norm_is_quadratic(seed in 0u64..1000, c in 0.2f64..4.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = SmoothingProblem::new(1, WeightSpec::gaussian(1, 2.0).unwrap(), Smoothing::One, Dispersion::Relativistic { m: 0.7 }).unwrap();
        let alg = build_algebra(1).unwrap();
        let b = Bump::new(1.2, 0.4).unwrap();
        let (u, v) = (random_spinor(2, &mut rng), random_spinor(2, &mut rng));
        let f0 = |r: f64| &u * C64::new(b.eval(r), 0.0);
        let f1 = |r: f64| &v * C64::new(b.eval(r), 0.0);
        let g0 = |r: f64| &u * C64::new(c * b.eval(r), 0.0);
        let g1 = |r: f64| &v * C64::new(c * b.eval(r), 0.0);
        let opts = SpaceTimeOptions::default();
        let a = smoothing_norm_1d_dirac(&p, &alg, &Profile1D { support: b.support(), f0: &f0, f1: &f1 }, &opts).unwrap();
        let z = smoothing_norm_1d_dirac(&p, &alg, &Profile1D { support: b.support(), f0: &g0, f1: &g1 }, &opts).unwrap();
        prop_assert!((z.value / a.value - c * c).abs() <= 1e-11 * c * c);
    }
}
