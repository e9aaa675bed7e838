//! Dirac-specific multipliers: the one-dimensional form `Q(r)` and its top
//! eigenspace, the two-dimensional `λ̃_k`, the radial `λ̃_rad`, and the
//! radial/general bound comparison.

mod algebra;
mod quadform;
mod spinor;

pub use algebra::{build_algebra, max_abs, random_spinor, random_unitary, DiracAlgebra, C64};
pub use quadform::{max_eigenpair, max_eigenpair_generic, projection_residual, EigenPair, QuadForm1D};
pub use spinor::{ProfileRow, SpinorProfile};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funk_hecke::{lambda_k, SmoothingProblem};
use quadform::dirac_mass;

/// `(ψ²/|φ'|)(‖w‖_{L¹} + (m/φ)|F_w(2r²)|)`, the top eigenvalue of `Q(r)`.
pub fn lambda_tilde_1d(problem: &SmoothingProblem, r: f64) -> Result<f64> {
    let m = dirac_mass(problem)?;
    if problem.d != 1 {
        return Err(Error::domain("lambda_tilde_1d", format!("problem has d = {}", problem.d)));
    }
    let pref = problem.prefactor(r)?;
    let norm = problem.weight.l1_norm_1d()?;
    let f = problem.weight.eval_fw(2.0 * r * r)?;
    Ok(pref * (norm + m / problem.phi.phi(r) * f.abs()))
}

/// `½(λ_k + λ_{k+1} + (m/√(r²+m²))|λ_k - λ_{k+1}|)` in two dimensions.
pub fn lambda_tilde_2d(problem: &SmoothingProblem, k: usize, r: f64) -> Result<f64> {
    let m = dirac_mass(problem)?;
    if problem.d != 2 {
        return Err(Error::domain("lambda_tilde_2d", format!("problem has d = {}", problem.d)));
    }
    let (a, b) = (lambda_k(problem, k, r)?, lambda_k(problem, k + 1, r)?);
    Ok(combine_2d(a, b, m, r))
}

pub(crate) fn combine_2d(a: f64, b: f64, m: f64, r: f64) -> f64 {
    let mass_factor = if m == 0.0 { 0.0 } else { m / r.hypot(m) };
    0.5 * (a + b + mass_factor * (a - b).abs())
}

/// `½((1 + m²/φ²)λ₀ + (r²/φ²)λ₁)` for radial data, `d ≥ 2`.
pub fn lambda_tilde_rad(problem: &SmoothingProblem, r: f64) -> Result<f64> {
    let m = dirac_mass(problem)?;
    if problem.d < 2 {
        return Err(Error::domain("lambda_tilde_rad", "radial Dirac multiplier needs d >= 2"));
    }
    Ok(combine_radial(lambda_k(problem, 0, r)?, lambda_k(problem, 1, r)?, m, r))
}

pub(crate) fn combine_radial(l0: f64, l1: f64, m: f64, r: f64) -> f64 {
    let phi2 = r * r + m * m;
    0.5 * ((1.0 + m * m / phi2) * l0 + (r * r / phi2) * l1)
}

/// Radial lower bound against the general upper bound on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    /// `2π max_r λ̃_rad(r)` over the grid.
    pub lower: f64,
    /// `2π max_k max_r λ_k(r)` over the grid.
    pub upper: f64,
    pub gap: f64,
    pub holds: bool,
    pub k_searched: usize,
    pub grid_points: usize,
}

/// Checks `2π sup λ̃_rad ≤ 2π sup_k sup_r λ_k` on `r_grid`. The `k` loop stops
/// after three consecutive `k` whose grid maximum is below the running best
/// by a factor `1 - 1e-6`, or at `k = 64`.
pub fn check_bounds(problem: &SmoothingProblem, r_grid: &[f64]) -> Result<BoundsReport> {
    let m = dirac_mass(problem)?;
    if problem.d < 2 {
        return Err(Error::domain("check_bounds", "bounds comparison needs d >= 2"));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let grid_max = |k: usize| -> Result<(f64, Vec<f64>)> {
        let vals = r_grid.iter().map(|&r| lambda_k(problem, k, r)).collect::<Result<Vec<_>>>()?;
        Ok((vals.iter().copied().fold(f64::NEG_INFINITY, f64::max), vals))
    };
    let (max0, l0) = grid_max(0)?;
    let (max1, l1) = grid_max(1)?;
    let lower = r_grid
        .iter()
        .zip(l0.iter().zip(&l1))
        .map(|(&r, (&a, &b))| combine_radial(a, b, m, r))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut best = max0.max(max1);
    let mut below = usize::from(max1 < best * (1.0 - 1e-6));
    let mut k = 1;
    while below < 3 && k < 64 {
        k += 1;
        let (mk, _) = grid_max(k)?;
        if mk < best * (1.0 - 1e-6) {
            below += 1;
        } else {
            below = 0;
        }
        best = best.max(mk);
    }
    let (lower, upper) = (tau * lower, tau * best);
    Ok(BoundsReport {
        lower,
        upper,
        gap: upper - lower,
        holds: lower <= upper * (1.0 + 1e-12),
        k_searched: k + 1,
        grid_points: r_grid.len(),
    })
}
