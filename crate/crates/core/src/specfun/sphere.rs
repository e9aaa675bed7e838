//! Sphere areas and dimensions of spaces of spherical harmonics.

use std::f64::consts::PI;

/// `|Sⁿ| = 2π^{(n+1)/2} / Γ((n+1)/2)`. `|S⁰| = 2` counts the two points `±1`.
pub fn sphere_area(n: usize) -> f64 {
    let h = (n as f64 + 1.0) / 2.0;
    2.0 * (h * PI.ln() - libm::lgamma(h)).exp()
}

fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Dimension of the homogeneous harmonic polynomials of degree `k` on `ℝ^d`.
///
/// `C(d+k-1, k) - C(d+k-3, k-2)`; for `d = 1` only `1` and `x` are harmonic.
pub fn harmonic_dim(d: usize, k: usize) -> u64 {
    if d == 0 {
        return 0;
    }
    if d == 1 {
        return u64::from(k <= 1);
    }
    let (d, k) = (d as i64, k as i64);
    binomial(d + k - 1, k) - binomial(d + k - 3, k - 2)
}
