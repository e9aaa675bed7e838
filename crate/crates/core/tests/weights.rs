use approx::assert_relative_eq;
use kysmooth::weights::*;
use proptest::prelude::*;

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[test]
fn closed_forms_agree_with_fourier_oracle() {
    let cases = [
        (WeightSpec::gaussian(1, 1.0).unwrap(), 1e-2, 10.0),
        (WeightSpec::gaussian(2, 0.5).unwrap(), 1e-2, 5.0),
        (WeightSpec::gaussian(3, 2.0).unwrap(), 1e-2, 20.0),
        (WeightSpec::exponential(1, 1.0).unwrap(), 1e-2, 100.0),
        (WeightSpec::exponential(2, 1.5).unwrap(), 1e-2, 100.0),
        (WeightSpec::exponential(3, 0.7).unwrap(), 1e-2, 50.0),
    ];
    for (w, lo, hi) in cases {
        for u in log_spaced(lo, hi, 20) {
            let closed = w.eval_fw(u).unwrap();
            let xi = (2.0 * u).sqrt();
            let numeric = fourier_oracle(|rho| w.profile(rho).unwrap(), w.d, xi).unwrap();
            assert!(
                ((closed - numeric) / closed).abs() <= 1e-6,
                "{w} d={} u={u}: closed {closed}, oracle {numeric}",
                w.d
            );
        }
    }
}

#[test]
fn power_weights_agree_with_mollified_oracle() {
    for &(d, s) in &[(3usize, 2.0), (2, 1.5), (4, 2.5)] {
        let w = WeightSpec::power(d, s).unwrap();
        for u in log_spaced(1e-2, 1e2, 20) {
            let closed = w.eval_fw(u).unwrap();
            let numeric = fourier_oracle_power(d, s, (2.0 * u).sqrt()).unwrap();
            assert!(
                ((closed - numeric) / closed).abs() <= 1e-6,
                "d={d} s={s} u={u}: closed {closed}, oracle {numeric}"
            );
        }
    }
}

#[test]
fn power_spec_example() {
    let w = WeightSpec::power(3, 2.0).unwrap();
    let numeric = fourier_oracle_power(3, 2.0, 1.0).unwrap();
    assert_relative_eq!(w.eval_fw(0.5).unwrap(), numeric, max_relative = 1e-7);
}

#[test]
fn one_dimensional_weights_are_even_and_positive() {
    for w in [WeightSpec::gaussian(1, 0.3).unwrap(), WeightSpec::exponential(1, 2.0).unwrap()] {
        for i in 0..=400 {
            let x = -20.0 + 0.1 * i as f64;
            let (a, b) = (w.profile(x).unwrap(), w.profile(-x).unwrap());
            assert!(a > 0.0 || x.abs() > 10.0 && a >= 0.0);
            assert_eq!(a, b);
        }
    }
}

/// A table of `F_w` for `e^{-|x|}` is inverted numerically and integrated over
/// the line; the result must match the norm read off the table.
#[test]
fn tabulated_l1_norm_against_inverse_transform() {
    let exact = WeightSpec::exponential(1, 1.0).unwrap();
    let us: Vec<f64> = (0..=4000).map(|i| (i as f64 / 4000.0).powi(2) * 5000.0).collect();
    let fs: Vec<f64> = us.iter().map(|&u| exact.eval_fw(u).unwrap()).collect();
    let tab = WeightSpec::tabulated(1, Table::new(us, fs).unwrap()).unwrap();
    let norm = tab.l1_norm_1d().unwrap();
    assert_relative_eq!(norm, 2.0, max_relative = 1e-12);

    // w(x) = (1/π) ∫₀^Ξ F(ξ²/2) cos(xξ) dξ, then trapezoid in x on [-40, 40]
    let xi_max = 100.0;
    let nxi = 20_000;
    let hxi = xi_max / nxi as f64;
    let w_at = |x: f64| -> f64 {
        let mut acc = 0.0;
        for j in 0..=nxi {
            let xi = j as f64 * hxi;
            let wt = if j == 0 || j == nxi { 0.5 } else { 1.0 };
            acc += wt * tab.eval_fw(xi * xi / 2.0).unwrap() * (x * xi).cos();
        }
        acc * hxi / std::f64::consts::PI
    };
    let nx = 1600;
    let hx = 80.0 / nx as f64;
    let integral: f64 = (0..=nx)
        .map(|i| {
            let x = -40.0 + i as f64 * hx;
            let wt = if i == 0 || i == nx { 0.5 } else { 1.0 };
            wt * w_at(x)
        })
        .sum::<f64>()
        * hx;
    assert_relative_eq!(integral, norm, max_relative = 2e-2);
}

proptest! {
    #[test]
    fn power_homogeneity(d in 2usize..8, frac in 0.05f64..0.95, u in 1e-4f64..1e4) {
        let s = frac * d as f64;
        let w = WeightSpec::power(d, s).unwrap();
        let g = (d as f64 - s) / 2.0;
        let base = w.eval_fw(1.0).unwrap();
        let v = w.eval_fw(u).unwrap() * u.powf(g);
        prop_assert!((v - base).abs() <= 1e-12 * base);
    }

    #[test]
    fn scaling_is_linear(a in 0.1f64..5.0, c in 0.1f64..10.0, u in 0.0f64..50.0) {
        let w = WeightSpec::gaussian(2, a).unwrap();
        let cw = w.scaled(c).unwrap();
        prop_assert!((cw.eval_fw(u).unwrap() - c * w.eval_fw(u).unwrap()).abs() <= 1e-14 * c * w.eval_fw(0.0).unwrap());
    }
}
