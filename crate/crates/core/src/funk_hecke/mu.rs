//! The Funk–Hecke functional
//!
//! ```text
//! μ_k[F] = |S^{d-2}| ∫₋₁¹ F(t) p_{d,k}(t) (1 - t²)^{(d-3)/2} dt      (d ≥ 2)
//! μ_0[F] = F(1) + F(-1),  μ_1[F] = F(1) - F(-1),  μ_k = 0 for k ≥ 2   (d = 1)
//! ```
//!
//! For the kernels `F(t) = F_w(r²(1 - t))` that define `λ_k` the integral is
//! taken in the gap variable `x = 1 - t ∈ [0, 2]`. Near `x = 0` the kernel may
//! be singular (power weights) or concentrated on a scale `1/r²` (large `r`),
//! so `[0, 1]` is cut into geometrically graded panels `[0, h], [h, 2h], …,
//! [1/2, 1]`. The first panel absorbs `x^{(d-3)/2 + γ}` into a Jacobi weight,
//! the panel `[1, 2]` absorbs `(2 - x)^{(d-3)/2}`, and the rest use
//! Gauss–Legendre. Each panel doubles its order from 16 until two
//! successive estimates agree.

use crate::error::{Error, Result};
use crate::specfun::legendre::legendre_unchecked;
use crate::specfun::{cached_rule, sphere_area};
use crate::weights::WeightSpec;

const BASE_ORDER: usize = 16;
const MAX_ORDER: usize = 512;
const PANEL_TOL: f64 = 1e-13;

/// `μ_k[F]` for a kernel given as a function of `t ∈ [-1, 1]`.
///
/// For `d ≥ 2` the order starts at 64 and doubles until two successive
/// estimates agree to `1e-10` relative (measured against `∫|F p|` when the
/// value itself cancels).
pub fn mu_k<F: Fn(f64) -> f64>(d: usize, k: usize, f: F) -> Result<f64> {
    match d {
        0 => Err(Error::domain("mu_k", "dimension must be at least 1")),
        1 => Ok(match k {
            0 => f(1.0) + f(-1.0),
            1 => f(1.0) - f(-1.0),
            _ => 0.0,
        }),
        _ => {
            let e = (d as f64 - 3.0) / 2.0;
            let area = sphere_area(d - 2);
            let eval = |n: usize| -> Result<(f64, f64)> {
                let rule = cached_rule(n, e, e)?;
                let (mut v, mut m) = (0.0, 0.0);
                for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let g = f(t) * legendre_unchecked(d, k, t);
                    v += w * g;
                    m += w * g.abs();
                }
                Ok((area * v, area * m))
            };
            let mut n = 64;
            let (mut prev, _) = eval(n)?;
            while n < 4096 {
                n *= 2;
                let (cur, mass) = eval(n)?;
                if !cur.is_finite() {
                    break;
                }
                if (cur - prev).abs() <= 1e-10 * cur.abs().max(1e-6 * mass) + 64.0 * f64::EPSILON * mass {
                    return Ok(cur);
                }
                prev = cur;
            }
            Err(Error::Quadrature {
                op: "mu_k",
                msg: format!("order doubling exhausted at {n} (d={d}, k={k})"),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum End {
    /// contains `x = 0`
    Origin,
    /// contains `x = 2`
    Far,
    Interior,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    end: End,
}

/// Number of graded levels on `[0, 1]` for a kernel varying on `u_scale / r²`.
fn grading_levels(r: f64, u_scale: f64) -> usize {
    let ratio = (r * r / u_scale).max(1.0);
    (12.0 + ratio.log2().ceil()).min(1000.0) as usize
}

fn build_panels(levels: usize, knots_x: &[f64]) -> Vec<Panel> {
    let mut base = Vec::with_capacity(levels + 1);
    let mut h = 0.5f64.powi(levels as i32 - 1);
    if h == 0.0 {
        h = f64::MIN_POSITIVE;
    }
    base.push(Panel {
        a: 0.0,
        b: h,
        end: End::Origin,
    });
    while h < 1.0 {
        let b = (2.0 * h).min(1.0);
        base.push(Panel {
            a: h,
            b,
            end: End::Interior,
        });
        h = b;
    }
    base.push(Panel {
        a: 1.0,
        b: 2.0,
        end: End::Far,
    });
    if knots_x.is_empty() {
        return base;
    }
    let mut out = Vec::with_capacity(base.len() + knots_x.len());
    for p in base {
        let inside: Vec<f64> = knots_x.iter().copied().filter(|&x| x > p.a && x < p.b).collect();
        if inside.is_empty() {
            out.push(p);
            continue;
        }
        let mut cuts = vec![p.a];
        cuts.extend(inside);
        cuts.push(p.b);
        let last = cuts.len() - 2;
        for (i, w) in cuts.windows(2).enumerate() {
            let end = match p.end {
                End::Origin if i == 0 => End::Origin,
                End::Far if i == last => End::Far,
                _ => End::Interior,
            };
            out.push(Panel { a: w[0], b: w[1], end });
        }
    }
    out
}

/// `μ_k[F_w(r²(1 - ·))]` for `d ≥ 2`.
pub fn mu_k_weight(weight: &WeightSpec, d: usize, k: usize, r: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::domain("mu_k_weight", "the gap scheme needs d >= 2"));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain("mu_k_weight", format!("r = {r} must be positive and finite")));
    }
    let e = (d as f64 - 3.0) / 2.0;
    let gamma = weight.singular_exponent();
    let r2 = r * r;
    let levels = grading_levels(r, weight.u_scale());
    let knots_x: Vec<f64> = weight
        .knots()
        .map(|us| us.iter().map(|u| u / r2).filter(|&x| x > 0.0 && x < 2.0).collect())
        .unwrap_or_default();
    let panels = build_panels(levels, &knots_x);

    let first = panels
        .iter()
        .map(|p| apply_rule(weight, d, k, r2, e, gamma, p, BASE_ORDER))
        .collect::<Result<Vec<_>>>()?;
    // panels far below the total contribute nothing at working precision
    let floor = 1e-16 * first.iter().map(|f| f.1).sum::<f64>();
    let mut total = 0.0;
    for (p, &(start, _)) in panels.iter().zip(&first) {
        let (value, _) = integrate_panel(weight, d, k, r2, e, gamma, p, start, floor)?;
        total += value;
    }
    Ok(sphere_area(d - 2) * total)
}

/// One rule of order `n` on a panel: `(value, ∫|integrand|)` of
/// `F_w(r²x) p_{d,k}(1-x) x^e (2-x)^e`.
#[allow(clippy::too_many_arguments)]
fn apply_rule(weight: &WeightSpec, d: usize, k: usize, r2: f64, e: f64, gamma: f64, p: &Panel, n: usize) -> Result<(f64, f64)> {
    let (alpha, beta) = match p.end {
        End::Origin => (0.0, e + gamma),
        End::Far => (e, 0.0),
        End::Interior => (0.0, 0.0),
    };
    let rule = cached_rule(n, alpha, beta)?;
    let half = 0.5 * (p.b - p.a);
    let (mut v, mut m) = (0.0, 0.0);
    for (&tau, &w) in rule.nodes.iter().zip(&rule.weights) {
        let x = p.a + half * (1.0 + tau);
        let f = weight.eval_fw(r2 * x)?;
        let poly = legendre_unchecked(d, k, 1.0 - x);
        let g = match p.end {
            End::Origin => f * x.powf(-gamma) * (2.0 - x).powf(e) * poly,
            End::Far => f * x.powf(e) * poly,
            End::Interior => f * (x * (2.0 - x)).powf(e) * poly,
        };
        v += w * g;
        m += w * g.abs();
    }
    let jac = match p.end {
        End::Origin => half.powf(e + gamma + 1.0),
        End::Far => half.powf(e + 1.0),
        End::Interior => half,
    };
    Ok((jac * v, jac * m))
}

/// Doubles the order on one panel from `BASE_ORDER` (whose value is `start`)
/// until two estimates agree to `PANEL_TOL` of the panel mass, or to `floor`.
#[allow(clippy::too_many_arguments)]
fn integrate_panel(
    weight: &WeightSpec,
    d: usize,
    k: usize,
    r2: f64,
    e: f64,
    gamma: f64,
    p: &Panel,
    start: f64,
    floor: f64,
) -> Result<(f64, f64)> {
    let apply = |n: usize| apply_rule(weight, d, k, r2, e, gamma, p, n);
    let mut n = BASE_ORDER;
    let mut prev = start;
    loop {
        n *= 2;
        let (cur, mass) = apply(n)?;
        if !cur.is_finite() {
            return Err(Error::Quadrature {
                op: "mu_k",
                msg: format!("non-finite kernel on [{}, {}] (r² = {r2})", p.a, p.b),
            });
        }
        if (cur - prev).abs() <= (PANEL_TOL * mass).max(floor) || mass == 0.0 {
            return Ok((cur, mass));
        }
        if n >= MAX_ORDER {
            return Err(Error::Quadrature {
                op: "mu_k",
                msg: format!(
                    "panel [{:.3e}, {:.3e}] not converged at order {n} (k={k}, r²={r2:.3e}, change {:.3e} vs mass {:.3e})",
                    p.a,
                    p.b,
                    (cur - prev).abs(),
                    mass
                ),
            });
        }
        prev = cur;
    }
}
