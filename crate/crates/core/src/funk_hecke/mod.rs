//! Funk–Hecke multipliers `μ_k` and the curves `λ_k(r)` built from them.
//!
//! ```text
//! λ_k(r) = r^{d-1} ψ(r)² / |φ'(r)| · μ_k[F_w(r²(1 - ·))]
//! ```
//!
//! In one dimension `μ_0, μ_1` reduce to `‖w‖_{L¹} ± F_w(2r²)`.

mod curve;
mod mu;
mod problem;

pub use curve::{log_grid, sample_curve, LambdaCurve, Variant};
pub use mu::{mu_k, mu_k_weight};
pub use problem::{Dispersion, Smoothing, SmoothingProblem};

use crate::error::{Error, Result};

/// `λ_k(r)` for any `d`; in one dimension this is [`lambda_k_1d`].
pub fn lambda_k(problem: &SmoothingProblem, k: usize, r: f64) -> Result<f64> {
    if problem.d == 1 {
        return lambda_k_1d(problem, k, r);
    }
    let pref = problem.prefactor(r)?;
    if pref == 0.0 {
        return Ok(0.0);
    }
    Ok(pref * mu_k_weight(&problem.weight, problem.d, k, r)?)
}

/// `(ψ²/|φ'|)(‖w‖_{L¹} ± F_w(2r²))`, `+` for `k = 0`, `-` for `k = 1`, and 0 for `k ≥ 2`.
pub fn lambda_k_1d(problem: &SmoothingProblem, k: usize, r: f64) -> Result<f64> {
    if problem.d != 1 {
        return Err(Error::domain("lambda_k_1d", format!("problem has d = {}", problem.d)));
    }
    let pref = problem.prefactor(r)?;
    let norm = problem.weight.l1_norm_1d()?;
    let f = problem.weight.eval_fw(2.0 * r * r)?;
    Ok(match k {
        0 => pref * (norm + f),
        1 => pref * (norm - f),
        _ => 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightSpec;
    use approx::assert_relative_eq;

    fn exp_problem() -> SmoothingProblem {
        SmoothingProblem::new(1, WeightSpec::exponential(1, 1.0).unwrap(), Smoothing::One, Dispersion::Schrodinger).unwrap()
    }

    #[test]
    fn one_dimensional_example() {
        assert_relative_eq!(lambda_k_1d(&exp_problem(), 0, 1.0).unwrap(), 1.2, max_relative = 1e-15);
    }

    #[test]
    fn one_dimensional_sum_cancels_profile() {
        let p = exp_problem();
        for &r in &[0.01, 0.5, 3.0] {
            let sum = lambda_k_1d(&p, 0, r).unwrap() + lambda_k_1d(&p, 1, r).unwrap();
            assert_relative_eq!(sum, 2.0 * 2.0 / (2.0 * r), max_relative = 1e-14);
        }
        let far = lambda_k_1d(&p, 0, 1e4).unwrap() - lambda_k_1d(&p, 1, 1e4).unwrap();
        assert!(far.abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_matches_mu() {
        let p = exp_problem();
        for &r in &[0.2, 1.0, 2.5] {
            for k in 0..3 {
                let via_mu = p.prefactor(r).unwrap()
                    * mu_k(1, k, |t| p.weight.eval_fw(r * r * (1.0 - t)).unwrap()).unwrap();
                assert_relative_eq!(lambda_k_1d(&p, k, r).unwrap(), via_mu, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn power_family_is_constant() {
        use std::f64::consts::PI;
        let p = SmoothingProblem::new(3, WeightSpec::power(3, 2.0).unwrap(), Smoothing::Matched, Dispersion::Schrodinger)
            .unwrap();
        for &r in &[1e-4, 0.3, 1.0, 40.0, 1e5] {
            assert_relative_eq!(lambda_k(&p, 0, r).unwrap(), (2.0 * PI).powi(3), max_relative = 1e-10);
            assert_relative_eq!(lambda_k(&p, 2, r).unwrap(), (2.0 * PI).powi(3) / 5.0, max_relative = 1e-10);
        }
    }
}
