//! Gauss–Jacobi rules for the weight `(1 - t)^α (1 + t)^β` on `[-1, 1]`.
//!
//! Nodes and weights come from the Golub–Welsch construction: the nodes are
//! the eigenvalues of the symmetric Jacobi matrix of the orthonormal Jacobi
//! polynomials and the weights are `μ₀ v₀²`, with `v₀` the first component
//! of each normalised eigenvector. The eigenproblem is solved in-module by
//! implicit QL on the tridiagonal matrix, carrying only the first row of the
//! eigenvector matrix. Optionally the nodes are polished by Newton iteration
//! on `P_n^{(α,β)}` and the weights recomputed from the derivative formula.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::gamma::log_gamma;
use crate::error::{Error, Result};

/// How the nodes are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodeMethod {
    #[default]
    GolubWelsch,
    /// Golub–Welsch start, then Newton on the Jacobi polynomial.
    Newton,
}

/// An `order`-point Gauss rule for `(1 - t)^alpha (1 + t)^beta` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub order: usize,
}

impl QuadratureRule {
    /// The common exponent for symmetric rules, `None` otherwise.
    pub fn jacobi_exponent(&self) -> Option<f64> {
        (self.alpha == self.beta).then_some(self.alpha)
    }

    /// `∫₋₁¹ (1-t)^α (1+t)^β dt`.
    pub fn weight_mass(&self) -> f64 {
        jacobi_mass(self.alpha, self.beta)
    }

    /// `Σ wᵢ f(tᵢ)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

fn jacobi_mass(alpha: f64, beta: f64) -> f64 {
    let ln = (alpha + beta + 1.0) * std::f64::consts::LN_2 + libm::lgamma(alpha + 1.0) + libm::lgamma(beta + 1.0)
        - libm::lgamma(alpha + beta + 2.0);
    ln.exp()
}

/// Symmetric rule for `(1 - t²)^exponent`.
pub fn gauss_jacobi(order: usize, exponent: f64) -> Result<QuadratureRule> {
    gauss_jacobi_ab(order, exponent, exponent, NodeMethod::GolubWelsch)
}

/// Gauss–Legendre rule (`α = β = 0`).
pub fn gauss_legendre(order: usize) -> Result<QuadratureRule> {
    gauss_jacobi_ab(order, 0.0, 0.0, NodeMethod::GolubWelsch)
}

/// General rule for `(1 - t)^alpha (1 + t)^beta`.
pub fn gauss_jacobi_ab(order: usize, alpha: f64, beta: f64, method: NodeMethod) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::domain("gauss_jacobi", "order must be at least 1"));
    }
    if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::domain(
            "gauss_jacobi",
            format!("exponents ({alpha}, {beta}) must both exceed -1"),
        ));
    }
    let n = order;
    let ab = alpha + beta;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for (i, d) in diag.iter_mut().enumerate() {
        let two_i_ab = 2.0 * i as f64 + ab;
        *d = if i == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (two_i_ab * (two_i_ab + 2.0))
        };
    }
    for (i, e) in off.iter_mut().enumerate().take(n - 1) {
        // coupling between orthonormal polynomials of degree i and i + 1
        let k = i as f64 + 1.0;
        let two_k_ab = 2.0 * k + ab;
        let b2 = if i == 0 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * k * (k + alpha) * (k + beta) * (k + ab)
                / (two_k_ab * two_k_ab * (two_k_ab + 1.0) * (two_k_ab - 1.0))
        };
        *e = b2.sqrt();
    }
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut first).map_err(|node| Error::NodeSolver { order: n, node })?;

    let mu0 = jacobi_mass(alpha, beta);
    let mut pairs: Vec<(f64, f64)> = diag.into_iter().zip(first.into_iter().map(|v| mu0 * v * v)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut nodes, mut weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();

    if method == NodeMethod::Newton {
        newton_polish(n, alpha, beta, &mut nodes, &mut weights)?;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        alpha,
        beta,
        order: n,
    })
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
///
/// `diag` holds the diagonal and is overwritten by the eigenvalues; `off[i]`
/// couples rows `i` and `i + 1` (the last entry is ignored). `first` carries
/// the first row of the accumulated rotation matrix. On failure the index of
/// the eigenvalue that did not converge is returned.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) -> std::result::Result<(), usize> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(l);
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let z = first[i + 1];
                first[i + 1] = s * first[i] + c * z;
                first[i] = c * first[i] - s * z;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// `(P_n(x), P_{n-1}(x))` in the standard Jacobi normalisation.
fn jacobi_pair(n: usize, alpha: f64, beta: f64, x: f64) -> (f64, f64) {
    let ab = alpha + beta;
    let mut p0 = 1.0;
    if n == 0 {
        return (p0, 0.0);
    }
    let mut p1 = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        let a1 = 2.0 * kf * (kf + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * c;
        let p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

fn newton_polish(n: usize, alpha: f64, beta: f64, nodes: &mut [f64], weights: &mut [f64]) -> Result<()> {
    let nf = n as f64;
    let ab = alpha + beta;
    let ln_const = (ab + 1.0) * std::f64::consts::LN_2 + log_gamma(nf + alpha + 1.0)? + log_gamma(nf + beta + 1.0)?
        - log_gamma(nf + ab + 1.0)?
        - log_gamma(nf + 1.0)?;
    let derivative = |x: f64| {
        let (pn, pn1) = jacobi_pair(n, alpha, beta, x);
        let c = 2.0 * nf + ab;
        let dp = (nf * ((alpha - beta) - c * x) * pn + 2.0 * (nf + alpha) * (nf + beta) * pn1) / (c * (1.0 - x * x));
        (pn, dp)
    };
    for (i, x) in nodes.iter_mut().enumerate() {
        let mut converged = false;
        for _ in 0..50 {
            let (p, dp) = derivative(*x);
            let step = p / dp;
            *x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-3) {
                converged = true;
                break;
            }
        }
        if !converged || !x.is_finite() || x.abs() >= 1.0 {
            return Err(Error::NodeSolver { order: n, node: i });
        }
        let (_, dp) = derivative(*x);
        weights[i] = (ln_const - (1.0 - *x * *x).ln() - 2.0 * dp.abs().ln()).exp();
    }
    Ok(())
}

type RuleKey = (usize, u64, u64);

fn rule_cache() -> &'static Mutex<HashMap<RuleKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoised [`gauss_jacobi_ab`] (Golub–Welsch). Rules are immutable and shared.
pub fn cached_rule(order: usize, alpha: f64, beta: f64) -> Result<Arc<QuadratureRule>> {
    let key = (order, alpha.to_bits(), beta.to_bits());
    if let Some(rule) = rule_cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(gauss_jacobi_ab(order, alpha, beta, NodeMethod::GolubWelsch)?);
    rule_cache()
        .lock()
        .expect("rule cache poisoned")
        .insert(key, Arc::clone(&rule));
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn two_point_legendre() {
        let rule = gauss_legendre(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert_relative_eq!(rule.nodes[0], -x, epsilon = 1e-15);
        assert_relative_eq!(rule.nodes[1], x, epsilon = 1e-15);
        assert_relative_eq!(rule.weights[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(rule.weights[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn chebyshev_closed_form() {
        for n in [1usize, 3, 8, 17, 64] {
            let rule = gauss_jacobi(n, -0.5).unwrap();
            for i in 0..n {
                // ascending order: node i is cos((2(n-i)-1)π/2n)
                let expected = ((2.0 * (n - i) as f64 - 1.0) * PI / (2.0 * n as f64)).cos();
                assert_relative_eq!(rule.nodes[i], expected, epsilon = 1e-14);
                assert_relative_eq!(rule.weights[i], PI / n as f64, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn monomial_against_half_exponent() {
        // ∫ t⁴ (1-t²)^{1/2} dt = π/16
        let rule = gauss_jacobi(8, 0.5).unwrap();
        assert_relative_eq!(rule.integrate(|t| t.powi(4)), PI / 16.0, max_relative = 1e-14);
    }

    #[test]
    fn weights_sum_to_mass() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, -0.5), (0.5, 0.5), (-0.75, 0.5), (1.5, -0.3), (-0.9, -0.9)] {
            for n in [1usize, 5, 32, 128] {
                let rule = gauss_jacobi_ab(n, a, b, NodeMethod::GolubWelsch).unwrap();
                let sum: f64 = rule.weights.iter().sum();
                assert_relative_eq!(sum, rule.weight_mass(), max_relative = 1e-12);
                assert!(rule.weights.iter().all(|&w| w > 0.0));
                assert!(rule.nodes.windows(2).all(|p| p[0] < p[1]));
                assert!(rule.nodes.iter().all(|t| t.abs() < 1.0));
            }
        }
    }

    #[test]
    fn symmetric_mass_closed_form() {
        // √π Γ(e+1) / Γ(e + 3/2)
        for &e in &[-0.5, 0.0, 0.5, 1.0, 2.5] {
            let rule = gauss_jacobi(10, e).unwrap();
            let expected = PI.sqrt() * (libm::lgamma(e + 1.0) - libm::lgamma(e + 1.5)).exp();
            assert_relative_eq!(rule.weight_mass(), expected, max_relative = 1e-13);
            assert_eq!(rule.jacobi_exponent(), Some(e));
        }
    }

    #[test]
    fn newton_agrees_with_golub_welsch() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, 0.5), (0.25, -0.75)] {
            let gw = gauss_jacobi_ab(40, a, b, NodeMethod::GolubWelsch).unwrap();
            let nt = gauss_jacobi_ab(40, a, b, NodeMethod::Newton).unwrap();
            for i in 0..40 {
                assert_relative_eq!(gw.nodes[i], nt.nodes[i], epsilon = 1e-13);
                assert_relative_eq!(gw.weights[i], nt.weights[i], max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(gauss_jacobi(0, 0.0).is_err());
        assert!(gauss_jacobi(4, -1.0).is_err());
        assert!(gauss_jacobi_ab(4, 0.0, -1.5, NodeMethod::GolubWelsch).is_err());
    }

    #[test]
    fn cache_returns_same_rule() {
        let a = cached_rule(24, -0.25, 0.5).unwrap();
        let b = cached_rule(24, -0.25, 0.5).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
