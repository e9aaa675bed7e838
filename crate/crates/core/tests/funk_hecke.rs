use kysmooth::closedform::bs_ck;
use kysmooth::funk_hecke::{lambda_k, log_grid, mu_k, sample_curve, Dispersion, Smoothing, SmoothingProblem, Variant};
use kysmooth::weights::WeightSpec;
use proptest::prelude::*;

fn power_problem(d: usize, s: f64, phi: Dispersion) -> SmoothingProblem {
    SmoothingProblem::new(d, WeightSpec::power(d, s).unwrap(), Smoothing::Matched, phi).unwrap()
}

fn s_values(d: usize) -> Vec<f64> {
    let mut v = vec![1.25];
    if 2.0 < d as f64 {
        v.push(2.0);
    }
    v.push(d as f64 - 0.25);
    v
}

#[test]
fn power_family_reproduces_ck() {
    for d in 2..=6 {
        for s in s_values(d) {
            let p = power_problem(d, s, Dispersion::Schrodinger);
            for k in 0..=5 {
                let ck = bs_ck(d, s, k).unwrap();
                for r in [1e-5, 0.03, 1.0, 7.0, 2e3] {
                    let v = lambda_k(&p, k, r).unwrap();
                    assert!((v / ck - 1.0).abs() <= 1e-8, "d={d} s={s} k={k} r={r}: {v} vs {ck}");
                }
            }
        }
    }
}

#[test]
fn power_family_constant_for_relativistic_phi() {
    let p = power_problem(4, 2.5, Dispersion::Relativistic { m: 2.0 });
    for k in 0..4 {
        let ck = bs_ck(4, 2.5, k).unwrap();
        for r in [1e-3, 0.5, 30.0] {
            assert!((lambda_k(&p, k, r).unwrap() / ck - 1.0).abs() <= 1e-8);
        }
    }
}

#[test]
fn dense_gaussian_curve_matches_pointwise() {
    let p = SmoothingProblem::new(3, WeightSpec::gaussian(3, 0.5).unwrap(), Smoothing::One, Dispersion::Schrodinger).unwrap();
    let grid = log_grid(1e-3, 1e3, 1000);
    for k in [0, 3] {
        let c = sample_curve(&p, Variant::SchrodingerK { k }, &grid).unwrap();
        assert!(c.values.iter().all(|v| v.is_finite()));
        for i in (0..1000).step_by(97) {
            assert_eq!(c.values[i], lambda_k(&p, k, grid[i]).unwrap());
        }
    }
}

#[test]
fn constant_family_gives_constant_curve() {
    let p = power_problem(3, 2.0, Dispersion::Schrodinger);
    let c = sample_curve(&p, Variant::SchrodingerK { k: 1 }, &log_grid(1e-4, 1e4, 50)).unwrap();
    let c1 = bs_ck(3, 2.0, 1).unwrap();
    assert!(c.values.iter().all(|v| (v / c1 - 1.0).abs() < 1e-9));
}

#[test]
fn gaussian_lambda_bounded_by_lambda0() {
    // μ_k of a positive-definite kernel are dominated by μ_0
    let p = SmoothingProblem::new(2, WeightSpec::gaussian(2, 1.0).unwrap(), Smoothing::One, Dispersion::Schrodinger).unwrap();
    for r in [0.1, 1.0, 4.0, 20.0] {
        let l0 = lambda_k(&p, 0, r).unwrap();
        for k in 1..8 {
            let lk = lambda_k(&p, k, r).unwrap();
            assert!(lk >= -1e-12 * l0 && lk <= l0 * (1.0 + 1e-12), "r={r} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mu_k_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, d in 2usize..6, k in 0usize..5) {
        let f = |t: f64| (t * 1.3).exp();
        let g = |t: f64| 1.0 / (2.5 - t);
        let lhs = mu_k(d, k, |t| a * f(t) + b * g(t)).unwrap();
        let rhs = a * mu_k(d, k, f).unwrap() + b * mu_k(d, k, g).unwrap();
        let scale = mu_k(d, 0, |t| a.abs() * f(t) + b.abs() * g(t)).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale);
    }

    #[test]
    fn weight_scaling_scales_lambda(c in 0.1f64..10.0, r in 0.05f64..20.0, k in 0usize..4) {
        let w = WeightSpec::exponential(3, 1.0).unwrap();
        let p = SmoothingProblem::new(3, w.clone(), Smoothing::One, Dispersion::Schrodinger).unwrap();
        let q = SmoothingProblem::new(3, w.scaled(c).unwrap(), Smoothing::One, Dispersion::Schrodinger).unwrap();
        let (a, b) = (lambda_k(&p, k, r).unwrap(), lambda_k(&q, k, r).unwrap());
        let l0 = lambda_k(&p, 0, r).unwrap();
        prop_assert!((b - c * a).abs() <= 1e-12 * c * l0);
    }
}
