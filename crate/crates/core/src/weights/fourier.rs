//! Numerical radial Fourier transform, used to check the closed-form `F_w`.
//!
//! For a radial profile `w(|x|)` on `ℝ^d`,
//!
//! ```text
//! ŵ(ξ) = ∫₀^∞ w(ρ) ρ^{d-1} Ω_d(ρ|ξ|) dρ,
//! Ω_d(z) = |S^{d-2}| ∫₋₁¹ cos(z t) (1 - t²)^{(d-3)/2} dt,   Ω_1(z) = 2 cos z.
//! ```
//!
//! `Ω_d` is evaluated with a Gauss–Jacobi rule sized to the oscillation, the
//! outer integral with tanh-sinh near the origin and adaptive Gauss–Kronrod
//! on panels of half a period beyond.

use crate::error::{Error, Result};
use crate::specfun::{cached_rule, integrate_adaptive_breaks, sphere_area, tanh_sinh};

/// `∫_{S^{d-1}} e^{-i z θ₁} dσ(θ)`.
pub fn angular_kernel(d: usize, z: f64) -> Result<f64> {
    match d {
        0 => Err(Error::domain("angular_kernel", "dimension must be at least 1")),
        1 => Ok(2.0 * z.cos()),
        _ => {
            let exponent = (d as f64 - 3.0) / 2.0;
            let order = (24.0 + 0.75 * z.abs()).ceil() as usize;
            let rule = cached_rule(order.next_power_of_two(), exponent, exponent)?;
            Ok(sphere_area(d - 2) * rule.integrate(|t| (z * t).cos()))
        }
    }
}

/// Radial Fourier transform `∫ w(|x|) e^{-ix·ξ} dx` at `|ξ| = xi`.
pub fn fourier_oracle<W: Fn(f64) -> f64>(profile: W, d: usize, xi: f64) -> Result<f64> {
    fourier_oracle_radial(|rho| profile(rho) * rho.powi(d as i32 - 1), d, xi)
}

/// As [`fourier_oracle`], taking the radial density `w(ρ) ρ^{d-1}` directly so
/// that singular profiles can be combined with the Jacobian analytically.
pub fn fourier_oracle_radial<W: Fn(f64) -> f64>(density: W, d: usize, xi: f64) -> Result<f64> {
    if d == 0 || !(xi >= 0.0) || !xi.is_finite() {
        return Err(Error::domain("fourier_oracle", format!("need d >= 1 and xi >= 0, got d={d}, xi={xi}")));
    }
    let radial = |rho: f64| -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        density(rho)
    };
    let cutoff = tail_cutoff(&radial)?;
    let half_period = if xi > 0.0 { std::f64::consts::PI / xi } else { f64::INFINITY };
    let inner = half_period.min(1.0).min(cutoff);
    let integrand = |rho: f64| radial(rho) * angular_kernel(d, rho * xi).unwrap_or(f64::NAN);

    let head = tanh_sinh(integrand, 0.0, inner, 1e-13, 14)?.value;

    // geometric panels, each further split to at most half a period
    let mut breaks = vec![inner];
    let mut left = inner;
    while left < cutoff {
        let right = (2.0 * left).min(cutoff);
        let pieces = ((right - left) / half_period).ceil().max(1.0) as usize;
        for j in 1..=pieces {
            breaks.push(left + (right - left) * j as f64 / pieces as f64);
        }
        left = right;
    }
    if breaks.len() > 400_000 {
        return Err(Error::Quadrature {
            op: "fourier_oracle",
            msg: format!("{} initial panels exceed budget", breaks.len()),
        });
    }
    let scale: f64 = breaks
        .windows(2)
        .map(|w| (w[1] - w[0]) * radial(0.5 * (w[0] + w[1])).abs())
        .sum::<f64>()
        + head.abs();
    let tail = integrate_adaptive_breaks(integrand, &breaks, 1e-15 * scale, 1e-13, 4 * breaks.len() + 4096)?;
    let value = head + tail.value;
    if !value.is_finite() {
        return Err(Error::Quadrature {
            op: "fourier_oracle",
            msg: format!("non-finite transform at xi = {xi}"),
        });
    }
    Ok(value)
}

/// Radius beyond which `|w(ρ)| ρ^d` is below `1e-17` of its observed peak.
fn tail_cutoff(radial: &impl Fn(f64) -> f64) -> Result<f64> {
    let mut peak: f64 = 0.0;
    let mut rho: f64 = 1.0 / 16.0;
    let mut below = 0;
    while rho < 1e7 {
        let v = (radial(rho) * rho).abs();
        if !v.is_finite() {
            return Err(Error::domain("fourier_oracle", format!("profile not finite at {rho}")));
        }
        peak = peak.max(v);
        if rho >= 1.0 && v <= 1e-17 * peak {
            below += 1;
            if below == 2 {
                return Ok(rho);
            }
        } else {
            below = 0;
        }
        rho *= 1.25;
    }
    Err(Error::Quadrature {
        op: "fourier_oracle",
        msg: "profile does not decay fast enough".into(),
    })
}

/// Transform of `ρ^{-s}` on `ℝ^d` at `|ξ| = xi > 0`, from Gaussian-mollified
/// profiles `ρ^{-s} e^{-ερ²}` and Neville extrapolation to `ε = 0`.
pub fn fourier_oracle_power(d: usize, s: f64, xi: f64) -> Result<f64> {
    if !(s > 0.0 && s < d as f64) || !(xi > 0.0) {
        return Err(Error::domain(
            "fourier_oracle_power",
            format!("need 0 < s < d and xi > 0, got s={s}, d={d}, xi={xi}"),
        ));
    }
    let levels = 4;
    let eps0 = xi * xi / 1000.0;
    let mut xs = Vec::with_capacity(levels);
    let mut ys = Vec::with_capacity(levels);
    for j in 0..levels {
        let eps = eps0 / f64::powi(2.0, j as i32);
        xs.push(eps);
        let exponent = d as f64 - 1.0 - s;
        ys.push(fourier_oracle_radial(|rho| rho.powf(exponent) * (-eps * rho * rho).exp(), d, xi)?);
    }
    Ok(neville_at_zero(&xs, &ys))
}

/// Value at 0 of the interpolating polynomial through `(xs, ys)`.
pub(crate) fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn kernel_closed_forms() {
        for z in [0.0f64, 0.3, 2.0, 17.5, 140.0] {
            // d = 3: 4π sin z / z
            let expect = if z == 0.0 { 4.0 * PI } else { 4.0 * PI * z.sin() / z };
            assert_relative_eq!(angular_kernel(3, z).unwrap(), expect, epsilon = 1e-12);
        }
        assert_relative_eq!(angular_kernel(5, 0.0).unwrap(), 8.0 * PI * PI / 3.0, max_relative = 1e-13);
        assert_relative_eq!(angular_kernel(2, 0.0).unwrap(), 2.0 * PI, max_relative = 1e-13);
    }

    #[test]
    fn gaussian_transforms() {
        let f = fourier_oracle(|x| (-x * x).exp(), 1, 0.0).unwrap();
        assert_relative_eq!(f, PI.sqrt(), max_relative = 1e-10);
        let f = fourier_oracle(|x| (-x * x).exp(), 3, 1.0).unwrap();
        assert_relative_eq!(f, PI.powf(1.5) * (-0.25f64).exp(), max_relative = 1e-10);
    }

    #[test]
    fn exponential_transform() {
        let f = fourier_oracle(|x| (-x).exp(), 1, 2.0).unwrap();
        assert_relative_eq!(f, 0.4, max_relative = 1e-10);
    }

    #[test]
    fn power_transform() {
        // |x|^{-2} on ℝ³ at |ξ| = 1 gives 2π²
        let f = fourier_oracle_power(3, 2.0, 1.0).unwrap();
        assert_relative_eq!(f, 2.0 * PI * PI, max_relative = 1e-7);
    }

    #[test]
    fn neville_recovers_polynomials() {
        let xs = [1.0, 0.5, 0.25, 0.125];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - x + 2.0 * x * x - x * x * x).collect();
        assert_relative_eq!(neville_at_zero(&xs, &ys), 3.0, epsilon = 1e-13);
    }
}
