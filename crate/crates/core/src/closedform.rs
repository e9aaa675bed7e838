//! Closed forms for the power weight `w(x) = |x|^{-s}`:
//!
//! ```text
//! c_k = 2^{1-s} (2π)^d Γ(s-1) Γ((d-s)/2 + k) / (Γ(s/2)² Γ((d+s)/2 + k - 1))
//! ```
//!
//! the constant value of `λ_k` when `ψ(r)² = r^{1-s}|φ'(r)|`, and the squared
//! norm `2π c_0` of the radial Dirac smoothing operator with
//! `ψ(r) = r^{1-s/2}(r² + m²)^{-1/4}`.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::specfun::log_gamma_ratio;

fn check(op: &'static str, d: usize, s: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::domain(op, format!("d = {d} must be at least 2")));
    }
    if !(s > 1.0 && s < d as f64) {
        return Err(Error::domain(op, format!("s = {s} must lie in (1, {d})")));
    }
    Ok(())
}

fn log_ck(d: usize, s: f64, k: usize, extra_two_pi: i32) -> Result<f64> {
    let df = d as f64;
    let kf = k as f64;
    let lg = log_gamma_ratio(
        &[s - 1.0, (df - s) / 2.0 + kf],
        &[s / 2.0, s / 2.0, (df + s) / 2.0 + kf - 1.0],
    )?;
    Ok((1.0 - s) * LN_2 + (d as i32 + extra_two_pi) as f64 * (2.0 * PI).ln() + lg)
}

/// `c_k` for `d ≥ 2`, `1 < s < d`. Strictly decreasing in `k`.
pub fn bs_ck(d: usize, s: f64, k: usize) -> Result<f64> {
    check("bs_ck", d, s)?;
    Ok(log_ck(d, s, k, 0)?.exp())
}

/// `2^{1-s}(2π)^{d+1} Γ(s-1)Γ((d-s)/2) / (Γ(s/2)² Γ((d+s)/2 - 1))`, which is `2π c_0`.
pub fn explicit_dirac_norm(d: usize, s: f64, m: f64) -> Result<f64> {
    check("explicit_dirac_norm", d, s)?;
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::domain("explicit_dirac_norm", format!("m = {m} must be positive")));
    }
    Ok(log_ck(d, s, 0, 1)?.exp())
}
