//! Direct space-time quadrature of the one-dimensional smoothing norms.
//!
//! The datum is given on the frequency side, `f(ξ) = (f₀(|ξ|) + sgn(ξ) f₁(|ξ|))/√2`,
//! and the evolution is the extension operator
//!
//! ```text
//! Sf(x, t) = ∫ e^{ixξ} ψ(|ξ|) U(t, ξ) f(ξ) dξ,
//! U = e^{itφ(|ξ|)}  (Schrödinger),   U = e^{-itA_ξ}  (Dirac),
//! ```
//!
//! so that `‖Sf‖² = ∫∫ |Sf(x,t)|² w(|x|) dx dt` is compared with
//! `2π Σ_k ∫ λ_k |f_k|²` directly. The `ξ` and `x` integrals use Gauss–Legendre
//! panels; `t` uses the trapezoid rule with a step below the Nyquist limit of
//! `|Sf|²`, over `[-T, T]` with `T` doubled until the added slab changes the
//! total by less than `rel_tol`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::dirac::{DiracAlgebra, QuadForm1D, C64};
use crate::error::{Error, Result};
use crate::funk_hecke::{lambda_k_1d, SmoothingProblem};
use crate::optimize::Interval;
use crate::specfun::gauss_legendre;

/// Radial profiles `f₀, f₁ : (0, ∞) → C^N`, both supported in `support`.
pub struct Profile1D<'a> {
    pub support: Interval,
    pub f0: &'a (dyn Fn(f64) -> DVector<C64> + Sync),
    pub f1: &'a (dyn Fn(f64) -> DVector<C64> + Sync),
}

impl Profile1D<'_> {
    fn components(&self) -> usize {
        (self.f0)(0.5 * (self.support.lo + self.support.hi)).len()
    }

    /// `f(ξ) = (f₀(|ξ|) + sgn(ξ) f₁(|ξ|))/√2`.
    fn at(&self, xi: f64) -> DVector<C64> {
        let r = xi.abs();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b) = ((self.f0)(r), (self.f1)(r));
        if xi >= 0.0 {
            (a + b) * C64::new(s, 0.0)
        } else {
            (a - b) * C64::new(s, 0.0)
        }
    }

    /// `‖f₀‖² + ‖f₁‖²`, which equals `‖f‖²_{L²(R)}`.
    pub fn norm_sq(&self) -> Result<f64> {
        support_integral(self.support, |r| (self.f0)(r).norm_squared() + (self.f1)(r).norm_squared())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeOptions {
    /// Stop doubling `T` once the new slab adds less than this fraction.
    pub rel_tol: f64,
    pub t_initial: f64,
    pub t_limit: f64,
    pub dt_max: f64,
    /// `x` is truncated where `w(|x|) < weight_cut · w(0)`.
    pub weight_cut: f64,
    pub x_panel_width: f64,
    pub panel_nodes: usize,
    /// Gauss–Legendre nodes per oscillation of the `ξ` integrand.
    pub xi_nodes_per_wave: f64,
}

impl Default for SpaceTimeOptions {
    fn default() -> Self {
        Self {
            rel_tol: 0.005,
            t_initial: 16.0,
            t_limit: 4096.0,
            dt_max: 0.1,
            weight_cut: 1e-13,
            x_panel_width: 1.0,
            panel_nodes: 16,
            xi_nodes_per_wave: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    /// Contribution of the last `t` slab, an estimate of the neglected tail.
    pub truncation_error: f64,
    pub t_max: f64,
    pub dt: f64,
    pub x_max: f64,
    pub x_nodes: usize,
    pub xi_nodes: usize,
    pub t_samples: usize,
}

/// Gauss–Legendre nodes and weights on `panels` equal panels of `[a, b]`.
fn panel_rule(a: f64, b: f64, panels: usize, nodes: usize) -> Result<Vec<(f64, f64)>> {
    let rule = gauss_legendre(nodes)?;
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * nodes);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            out.push((lo + 0.5 * h * (1.0 + t), 0.5 * h * w));
        }
    }
    Ok(out)
}

/// `∫_support g(r) dr` with 64 Gauss–Legendre panels of 16 nodes.
pub(crate) fn support_integral<G: FnMut(f64) -> f64>(support: Interval, mut g: G) -> Result<f64> {
    Ok(panel_rule(support.lo, support.hi, 64, 16)?.into_iter().map(|(r, w)| w * g(r)).sum())
}

fn x_extent(problem: &SmoothingProblem, cut: f64) -> Result<f64> {
    let w = |x: f64| {
        problem
            .weight
            .profile(x)
            .ok_or_else(|| Error::Unsupported(format!("no closed-form profile for weight {}", problem.weight)))
    };
    let w0 = w(0.0)?;
    if !(w0 > 0.0) || !w0.is_finite() {
        return Err(Error::domain("smoothing_norm_1d", "weight must be finite and positive at 0"));
    }
    let mut hi = 1.0;
    while w(hi)? > cut * w0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::domain("smoothing_norm_1d", "weight does not decay"));
        }
    }
    let mut lo = 0.0;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if w(mid)? > cut * w0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Frequency-side data per `ξ` node: `v(t) = cos(tφ) g + i sin(tφ) h`.
struct XiData {
    xi: Vec<f64>,
    phi: Vec<f64>,
    g: Vec<C64>,
    h: Vec<C64>,
}

struct Engine<'a> {
    problem: &'a SmoothingProblem,
    profile: &'a Profile1D<'a>,
    n: usize,
    /// `(ξ, ψ(|ξ|)f(ξ)) ↦ h` for the propagator.
    h_of: &'a (dyn Fn(f64, &DVector<C64>) -> DVector<C64> + Sync),
    opts: SpaceTimeOptions,
    x: Vec<(f64, f64)>,
    x_max: f64,
}

impl Engine<'_> {
    fn xi_data(&self, t_max: f64) -> Result<XiData> {
        let (a, b) = (self.profile.support.lo, self.profile.support.hi);
        let phi = |r: f64| self.problem.phi.phi(r);
        let phase = self.x_max * (b - a) + t_max * (phi(b) - phi(a)).abs();
        let waves = phase / (2.0 * std::f64::consts::PI);
        let nodes = self.opts.panel_nodes;
        let panels = ((waves * self.opts.xi_nodes_per_wave / nodes as f64).ceil() as usize).max(1) + 6;
        let half = panel_rule(a, b, panels, nodes)?;
        let mut d = XiData {
            xi: Vec::new(),
            phi: Vec::new(),
            g: Vec::new(),
            h: Vec::new(),
        };
        for sign in [-1.0, 1.0] {
            for &(r, w) in &half {
                let xi = sign * r;
                let g = self.profile.at(xi) * C64::new(w * self.problem.psi(r)?, 0.0);
                let h = (self.h_of)(xi, &g);
                d.xi.push(xi);
                d.phi.push(phi(r));
                d.g.extend(g.iter());
                d.h.extend(h.iter());
            }
        }
        Ok(d)
    }

    /// `∫ |Sf(x, t)|² w(|x|) dx` at each `t`.
    fn slab(&self, data: &XiData, ts: &[f64]) -> Vec<f64> {
        let nx = self.x.len();
        let nxi = data.xi.len();
        let n = self.n;
        let mut e = Vec::with_capacity(nx * nxi);
        for &(x, _) in &self.x {
            for &xi in &data.xi {
                let (s, c) = (x * xi).sin_cos();
                e.push(C64::new(c, s));
            }
        }
        let xw: Vec<f64> = self
            .x
            .iter()
            .map(|&(x, w)| w * self.problem.weight.profile(x.abs()).unwrap_or(0.0))
            .collect();
        let one = |t: f64| -> f64 {
            let mut v = vec![C64::new(0.0, 0.0); nxi * n];
            for i in 0..nxi {
                let (s, c) = (t * data.phi[i]).sin_cos();
                for comp in 0..n {
                    let (g, h) = (data.g[i * n + comp], data.h[i * n + comp]);
                    v[comp * nxi + i] = g * c + C64::new(-h.im * s, h.re * s);
                }
            }
            let mut total = 0.0;
            for j in 0..nx {
                let row = &e[j * nxi..(j + 1) * nxi];
                let mut acc = 0.0;
                for comp in 0..n {
                    let vc = &v[comp * nxi..(comp + 1) * nxi];
                    let (mut re, mut im) = (0.0, 0.0);
                    for (ej, vi) in row.iter().zip(vc) {
                        re += ej.re * vi.re - ej.im * vi.im;
                        im += ej.re * vi.im + ej.im * vi.re;
                    }
                    acc += re * re + im * im;
                }
                total += xw[j] * acc;
            }
            total
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            ts.par_iter().map(|&t| one(t)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            ts.iter().map(|&t| one(t)).collect()
        }
    }

    fn run(&self) -> Result<NormEstimate> {
        let (a, b) = (self.profile.support.lo, self.profile.support.hi);
        let phi_max = self.problem.phi.phi(a).abs().max(self.problem.phi.phi(b).abs());
        let dt = self.opts.dt_max.min(0.9 * std::f64::consts::PI / phi_max.max(1e-300));
        let mut t_hi = self.opts.t_initial;
        let mut t_lo = -1.0;
        let mut total = 0.0;
        let mut samples = 0;
        let mut xi_nodes = 0;
        loop {
            let data = self.xi_data(t_hi)?;
            xi_nodes = xi_nodes.max(data.xi.len());
            let j_max = (t_hi / dt).floor() as i64;
            let ts: Vec<f64> = (-j_max..=j_max)
                .map(|j| j as f64 * dt)
                .filter(|t| t.abs() > t_lo)
                .collect();
            samples += ts.len();
            let vals = self.slab(&data, &ts);
            let added: f64 = dt * pairwise_sum(&vals);
            total += added;
            if !total.is_finite() {
                return Err(Error::Quadrature {
                    op: "smoothing_norm_1d",
                    msg: "non-finite space-time integral".into(),
                });
            }
            if t_lo >= 0.0 && added.abs() <= self.opts.rel_tol * total.abs() {
                return Ok(NormEstimate {
                    value: total,
                    truncation_error: added.abs(),
                    t_max: t_hi,
                    dt,
                    x_max: self.x_max,
                    x_nodes: self.x.len(),
                    xi_nodes,
                    t_samples: samples,
                });
            }
            if total == 0.0 && t_lo >= 0.0 {
                return Ok(NormEstimate {
                    value: 0.0,
                    truncation_error: 0.0,
                    t_max: t_hi,
                    dt,
                    x_max: self.x_max,
                    x_nodes: self.x.len(),
                    xi_nodes,
                    t_samples: samples,
                });
            }
            t_lo = j_max as f64 * dt;
            t_hi *= 2.0;
            if t_hi > self.opts.t_limit {
                return Err(Error::Quadrature {
                    op: "smoothing_norm_1d",
                    msg: format!(
                        "doubling T to {t_hi} still changes the norm by {:.3e} (tolerance {})",
                        added.abs() / total.abs(),
                        self.opts.rel_tol
                    ),
                });
            }
        }
    }
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (l, r) = v.split_at(v.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

fn engine<'a>(
    problem: &'a SmoothingProblem,
    profile: &'a Profile1D<'a>,
    h_of: &'a (dyn Fn(f64, &DVector<C64>) -> DVector<C64> + Sync),
    opts: SpaceTimeOptions,
) -> Result<Engine<'a>> {
    if problem.d != 1 {
        return Err(Error::domain("smoothing_norm_1d", format!("problem has d = {}", problem.d)));
    }
    let s = profile.support;
    if !(s.lo > 0.0 && s.hi > s.lo && s.hi.is_finite()) {
        return Err(Error::domain("smoothing_norm_1d", "profile support must be a bounded interval in (0, inf)"));
    }
    let x_max = x_extent(problem, opts.weight_cut)?;
    let panels = (x_max / opts.x_panel_width).ceil() as usize;
    let mut x = panel_rule(-x_max, 0.0, panels, opts.panel_nodes)?;
    x.extend(panel_rule(0.0, x_max, panels, opts.panel_nodes)?);
    Ok(Engine {
        problem,
        profile,
        n: profile.components(),
        h_of,
        opts,
        x,
        x_max,
    })
}

/// Direct `‖Sf‖²` for `e^{itφ(|D|)}`; vector-valued profiles are summed componentwise.
pub fn smoothing_norm_1d_schrodinger(problem: &SmoothingProblem, profile: &Profile1D<'_>, opts: &SpaceTimeOptions) -> Result<NormEstimate> {
    let h_of = |_: f64, g: &DVector<C64>| g.clone();
    engine(problem, profile, &h_of, *opts)?.run()
}

/// Direct `‖S̃f‖²` for `e^{-itH_m}` with the algebra `alg` (`d = 1`, `N = 2`).
pub fn smoothing_norm_1d_dirac(
    problem: &SmoothingProblem,
    alg: &DiracAlgebra,
    profile: &Profile1D<'_>,
    opts: &SpaceTimeOptions,
) -> Result<NormEstimate> {
    let m = problem
        .phi
        .mass()
        .ok_or_else(|| Error::domain("smoothing_norm_1d_dirac", "needs a relativistic dispersion"))?;
    if alg.d != 1 || profile.components() != alg.n {
        return Err(Error::domain("smoothing_norm_1d_dirac", "needs the d = 1 algebra and C^2-valued profiles"));
    }
    let h_of = |xi: f64, g: &DVector<C64>| -> DVector<C64> {
        let phi = xi.hypot(m);
        let a: DMatrix<C64> = alg.symbol(&[xi], m);
        (a * g) * C64::new(-1.0 / phi, 0.0)
    };
    engine(problem, profile, &h_of, *opts)?.run()
}

/// `2π ∫ (λ₀|f₀|² + λ₁|f₁|²) dr`.
pub fn decomposition_1d_schrodinger(problem: &SmoothingProblem, profile: &Profile1D<'_>) -> Result<f64> {
    let tau = 2.0 * std::f64::consts::PI;
    let mut err = None;
    let v = support_integral(profile.support, |r| {
        let (l0, l1) = match (lambda_k_1d(problem, 0, r), lambda_k_1d(problem, 1, r)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                err.get_or_insert(e);
                return 0.0;
            }
        };
        l0 * (profile.f0)(r).norm_squared() + l1 * (profile.f1)(r).norm_squared()
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(tau * v),
    }
}

/// `⟨Q(r)(βf₀, αf₁), (βf₀, αf₁)⟩` at one radius.
pub fn dirac_quadratic_form(q: &QuadForm1D, alg: &DiracAlgebra, f0: &DVector<C64>, f1: &DVector<C64>) -> f64 {
    let p = &alg.beta * f0;
    let s = &alg.alphas[0] * f1;
    q.a * p.norm_squared() + q.b * p.dotc(&s).re + q.c * s.norm_squared()
}

/// `2π ∫ ⟨Q(r)(βf₀, αf₁), (βf₀, αf₁)⟩ dr`.
pub fn decomposition_1d_dirac(problem: &SmoothingProblem, alg: &DiracAlgebra, profile: &Profile1D<'_>) -> Result<f64> {
    let tau = 2.0 * std::f64::consts::PI;
    let mut err = None;
    let v = support_integral(profile.support, |r| match QuadForm1D::new(problem, r) {
        Ok(q) => dirac_quadratic_form(&q, alg, &(profile.f0)(r), &(profile.f1)(r)),
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(tau * v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funk_hecke::{Dispersion, Smoothing};
    use crate::oracle::Bump;
    use crate::weights::WeightSpec;

    fn scalar(b: Bump, c: f64) -> impl Fn(f64) -> DVector<C64> + Sync {
        move |r| DVector::from_element(1, C64::new(c * b.eval(r), 0.0))
    }

    #[test]
    fn zero_profile_has_zero_norm() {
        let p = SmoothingProblem::new(1, WeightSpec::gaussian(1, 1.0).unwrap(), Smoothing::One, Dispersion::Schrodinger).unwrap();
        let b = Bump::new(1.0, 0.5).unwrap();
        let z = scalar(b, 0.0);
        let prof = Profile1D {
            support: b.support(),
            f0: &z,
            f1: &z,
        };
        assert_eq!(smoothing_norm_1d_schrodinger(&p, &prof, &SpaceTimeOptions::default()).unwrap().value, 0.0);
    }

    #[test]
    fn gaussian_weight_bump_matches_decomposition() {
        let p = SmoothingProblem::new(1, WeightSpec::gaussian(1, 1.0).unwrap(), Smoothing::One, Dispersion::Schrodinger).unwrap();
        let b = Bump::new(1.2, 0.6).unwrap();
        let f0 = scalar(b, 1.0);
        let f1 = scalar(b, 0.4);
        let prof = Profile1D {
            support: b.support(),
            f0: &f0,
            f1: &f1,
        };
        let direct = smoothing_norm_1d_schrodinger(&p, &prof, &SpaceTimeOptions::default()).unwrap();
        let target = decomposition_1d_schrodinger(&p, &prof).unwrap();
        assert!((direct.value / target - 1.0).abs() < 0.02, "{direct:?} vs {target}");
    }
}
