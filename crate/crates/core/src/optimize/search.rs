//! Supremum of a single curve over `r ∈ [r_min, r_max]` and its level sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funk_hecke::log_grid;

/// Relative spread below which a sampled curve counts as constant.
const FLAT_REL: f64 = 1e-10;
/// Relative change over the outermost decade below which a boundary is a plateau.
const PLATEAU_REL: f64 = 1e-12;
/// Log-log slope toward a boundary at or above which the curve is called divergent.
const DIVERGENT_SLOPE: f64 = 0.05;
/// Candidate peaks within this relative distance of the best are reported as ties.
pub const TIE_REL: f64 = 1e-9;
const MAX_CANDIDATES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub r_min: f64,
    pub r_max: f64,
    /// Points of the coarse log grid.
    pub points: usize,
    /// Golden-section bracket width in `ln r`; also the bisection width for level sets.
    pub tol: f64,
    /// Level-set depth relative to the supremum: `ε = eps_rel · |sup|`.
    pub eps_rel: f64,
    /// Largest `k` searched.
    pub k_max: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            r_min: 1e-6,
            r_max: 1e6,
            points: 512,
            tol: 1e-8,
            eps_rel: 1e-3,
            k_max: 64,
        }
    }
}

impl SearchOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(Error::domain(
                "SearchOptions",
                format!("need 0 < r_min < r_max < inf, got [{}, {}]", self.r_min, self.r_max),
            ));
        }
        if self.points < 3 {
            return Err(Error::domain("SearchOptions", "need at least 3 grid points"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::domain("SearchOptions", format!("tol = {} must be positive", self.tol)));
        }
        if !(self.eps_rel > 0.0) {
            return Err(Error::domain("SearchOptions", format!("eps = {} must be positive", self.eps_rel)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        log_grid(self.r_min, self.r_max, self.points)
    }
}

/// How a curve behaves over the outermost decade of the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// grows toward the boundary at least like a small power of `r`
    Divergent,
    /// grows toward the boundary, but slower than [`Boundary::Divergent`]
    Saturating,
    Plateau,
    Decaying,
}

impl Boundary {
    fn increasing(self) -> bool {
        matches!(self, Boundary::Divergent | Boundary::Saturating)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Limit {
    #[serde(rename = "r->0+")]
    RToZero,
    #[serde(rename = "r->inf")]
    RToInfinity,
    #[serde(rename = "k->inf")]
    KToInfinity,
}

/// Where the supremum of one curve sits.
#[derive(Debug, Clone, PartialEq)]
pub enum Location {
    /// attained at these radii (ties included)
    Points(Vec<f64>),
    /// the sampled curve is constant
    Plateau,
    /// approached toward a boundary of the window and not attained inside it
    Limit(Limit),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RSupremum {
    /// `+inf` for a divergent boundary.
    pub sup: f64,
    pub attained: bool,
    pub location: Location,
    pub left: Boundary,
    pub right: Boundary,
    /// Successfully evaluated `(r, value)` pairs, increasing in `r`; includes refined peaks.
    pub samples: Vec<(f64, f64)>,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[cfg(feature = "parallel")]
fn eval_all<F>(f: &F, grid: &[f64]) -> Vec<Result<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    grid.par_iter().map(|&r| f(r)).collect()
}

#[cfg(not(feature = "parallel"))]
fn eval_all<F>(f: &F, grid: &[f64]) -> Vec<Result<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    grid.iter().map(|&r| f(r)).collect()
}

fn eval_or_neg_inf<F: Fn(f64) -> Result<f64>>(f: &F, r: f64) -> f64 {
    match f(r) {
        Ok(v) if !v.is_nan() => v,
        _ => f64::NEG_INFINITY,
    }
}

/// Golden-section maximisation of `f(e^x)` on `[a, b]`.
fn golden<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = eval_or_neg_inf(f, x1.exp());
    let mut f2 = eval_or_neg_inf(f, x2.exp());
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = eval_or_neg_inf(f, x1.exp());
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = eval_or_neg_inf(f, x2.exp());
        }
    }
    if f1 >= f2 {
        (x1.exp(), f1)
    } else {
        (x2.exp(), f2)
    }
}

/// Compares the boundary value with the value one decade inside.
fn classify(v_edge: f64, v_inner: f64) -> Boundary {
    if v_edge == f64::INFINITY {
        return Boundary::Divergent;
    }
    let scale = v_edge.abs().max(v_inner.abs());
    if (v_edge - v_inner).abs() <= PLATEAU_REL * scale {
        return Boundary::Plateau;
    }
    if v_edge < v_inner {
        return Boundary::Decaying;
    }
    if v_inner > 0.0 && (v_edge / v_inner).log10() >= DIVERGENT_SLOPE {
        Boundary::Divergent
    } else {
        Boundary::Saturating
    }
}

/// Index of the sample closest to one decade inward from `from`.
fn decade_in(samples: &[(f64, f64)], from: usize, inward: bool) -> usize {
    let target = if inward {
        samples[from].0 * 10.0
    } else {
        samples[from].0 / 10.0
    };
    let mut best = from;
    for (i, s) in samples.iter().enumerate() {
        if (s.0.ln() - target.ln()).abs() < (samples[best].0.ln() - target.ln()).abs() {
            best = i;
        }
    }
    if best == from {
        if inward {
            (from + 1).min(samples.len() - 1)
        } else {
            from.saturating_sub(1)
        }
    } else {
        best
    }
}

/// Supremum of `f` over `[r_min, r_max]`: a log-grid scan followed by
/// golden-section refinement in `ln r` around the highest local maxima.
///
/// A maximum on the first or last grid point toward which the curve is still
/// increasing is reported as a [`Location::Limit`]; if the increase over the
/// last decade has log-log slope at least 0.05 the supremum is `+inf`.
/// Points where `f` fails are skipped; the search errors only if every point
/// fails.
pub fn sup_over_r<F>(f: &F, opts: &SearchOptions) -> Result<RSupremum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    opts.validate()?;
    let grid = opts.grid();
    let mut samples = Vec::with_capacity(grid.len());
    let mut failures = 0;
    let mut first_failure = None;
    for (&r, res) in grid.iter().zip(eval_all(f, &grid)) {
        match res {
            Ok(v) if !v.is_nan() => samples.push((r, v)),
            Ok(v) => {
                failures += 1;
                first_failure.get_or_insert_with(|| format!("r = {r}: value {v}"));
            }
            Err(e) => {
                failures += 1;
                first_failure.get_or_insert_with(|| format!("r = {r}: {e}"));
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::AllPointsFailed(first_failure.unwrap_or_default()));
    }
    let n = samples.len();
    let gmax = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let gmin = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let base = |location, attained, sup, left, right, samples| RSupremum {
        sup,
        attained,
        location,
        left,
        right,
        samples,
        failures,
        first_failure: first_failure.clone(),
    };

    if gmax.is_finite() && gmax - gmin <= FLAT_REL * gmax.abs() {
        return Ok(base(Location::Plateau, true, gmax, Boundary::Plateau, Boundary::Plateau, samples));
    }
    let left = if n > 1 {
        classify(samples[0].1, samples[decade_in(&samples, 0, true)].1)
    } else {
        Boundary::Plateau
    };
    let right = if n > 1 {
        classify(samples[n - 1].1, samples[decade_in(&samples, n - 1, false)].1)
    } else {
        Boundary::Plateau
    };

    // candidate local maxima, highest first
    let mut cand: Vec<usize> = (0..n)
        .filter(|&i| {
            let v = samples[i].1;
            (i == 0 || v >= samples[i - 1].1) && (i + 1 == n || v >= samples[i + 1].1)
        })
        .collect();
    cand.sort_by(|&i, &j| samples[j].1.total_cmp(&samples[i].1).then(i.cmp(&j)));
    cand.truncate(MAX_CANDIDATES);

    // (r, value, at_edge)
    let mut peaks: Vec<(f64, f64, Option<Limit>)> = Vec::new();
    for &i in &cand {
        let (r, v) = samples[i];
        let edge = if i == 0 {
            Some(Limit::RToZero)
        } else if i + 1 == n {
            Some(Limit::RToInfinity)
        } else {
            None
        };
        if !v.is_finite() {
            peaks.push((r, v, edge));
            continue;
        }
        let lo = samples[i.saturating_sub(1)].0.ln();
        let hi = samples[(i + 1).min(n - 1)].0.ln();
        let (rg, vg) = golden(f, lo, hi, opts.tol);
        let edge_grows = match edge {
            Some(Limit::RToZero) => left.increasing(),
            Some(Limit::RToInfinity) => right.increasing(),
            _ => false,
        };
        if edge_grows {
            // round-off can pull the refinement off the edge; the trend decides
            peaks.push((r, v.max(vg), edge));
        } else if vg > v {
            peaks.push((rg, vg, None));
        } else {
            peaks.push((r, v, edge));
        }
    }
    let sup = peaks.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<_> = peaks
        .iter()
        .filter(|p| p.1 >= sup - TIE_REL * sup.abs() || p.1 == sup)
        .copied()
        .collect();

    for p in &peaks {
        if p.1.is_finite() && !samples.iter().any(|s| s.0 == p.0) {
            samples.push((p.0, p.1));
        }
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));

    // a boundary tie toward which the curve keeps growing makes the sup a limit
    for p in &ties {
        let grows = match p.2 {
            Some(Limit::RToZero) => left.increasing(),
            Some(Limit::RToInfinity) => right.increasing(),
            _ => false,
        };
        if grows {
            let divergent = match p.2 {
                Some(Limit::RToZero) => left == Boundary::Divergent,
                _ => right == Boundary::Divergent,
            };
            let sup = if divergent { f64::INFINITY } else { sup };
            return Ok(base(Location::Limit(p.2.unwrap()), false, sup, left, right, samples));
        }
    }
    let mut rs: Vec<f64> = ties.iter().map(|p| p.0).collect();
    rs.sort_by(f64::total_cmp);
    rs.dedup_by(|a, b| (*a / *b - 1.0).abs() <= 1e-6);
    Ok(base(Location::Points(rs), true, sup, left, right, samples))
}

/// A closed interval `[lo, hi]` of radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// Midpoint in `ln r`.
    pub fn log_mid(&self) -> f64 {
        (self.lo * self.hi).sqrt()
    }

    pub fn contains(&self, r: f64) -> bool {
        self.lo <= r && r <= self.hi
    }
}

/// Maximal intervals of `[samples.first, samples.last]` on which `f ≥ sup - eps`.
/// Each boundary between an inside and an outside sample is refined by
/// bisection in `ln r` to width `tol`. Runs that reach the first or last sample
/// extend to that sample.
pub fn level_set<F>(f: &F, samples: &[(f64, f64)], sup: f64, eps: f64, tol: f64) -> Result<Vec<Interval>>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(eps > 0.0) {
        return Err(Error::domain("level_set", format!("eps = {eps} must be positive")));
    }
    if !sup.is_finite() || samples.is_empty() {
        return Ok(Vec::new());
    }
    let thr = sup - eps;
    let inside = |v: f64| v >= thr;
    let bisect = |mut xin: f64, mut xout: f64| -> f64 {
        while (xin - xout).abs() > tol {
            let mid = 0.5 * (xin + xout);
            if inside(eval_or_neg_inf(f, mid.exp())) {
                xin = mid;
            } else {
                xout = mid;
            }
        }
        xin.exp()
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < samples.len() {
        if !inside(samples[i].1) {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < samples.len() && inside(samples[i + 1].1) {
            i += 1;
        }
        let lo = if start == 0 {
            samples[0].0
        } else {
            bisect(samples[start].0.ln(), samples[start - 1].0.ln())
        };
        let hi = if i + 1 == samples.len() {
            samples[i].0
        } else {
            bisect(samples[i].0.ln(), samples[i + 1].0.ln())
        };
        out.push(Interval { lo, hi });
        i += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn constant_curve_is_a_plateau() {
        let res = sup_over_r(&|_| Ok(3.5), &opts()).unwrap();
        assert_eq!(res.sup, 3.5);
        assert!(res.attained);
        assert_eq!(res.location, Location::Plateau);
        let ls = level_set(&|_| Ok(3.5), &res.samples, res.sup, 1e-3, 1e-8).unwrap();
        assert_eq!(ls, vec![Interval { lo: 1e-6, hi: 1e6 }]);
    }

    #[test]
    fn unimodal_peak() {
        let f = |r: f64| Ok((-(r.ln()).powi(2)).exp());
        let res = sup_over_r(&f, &opts()).unwrap();
        assert_relative_eq!(res.sup, 1.0, max_relative = 1e-15);
        match &res.location {
            Location::Points(rs) => {
                assert_eq!(rs.len(), 1);
                assert!((rs[0] - 1.0).abs() < 1e-7);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(res.left, Boundary::Decaying);
        assert_eq!(res.right, Boundary::Decaying);
        let ls = level_set(&f, &res.samples, res.sup, 0.01, 1e-10).unwrap();
        assert_eq!(ls.len(), 1);
        // e^{-x²} ≥ 0.99 ⇔ |x| ≤ √(-ln 0.99)
        let half = (-(0.99f64).ln()).sqrt();
        assert_relative_eq!(ls[0].lo.ln(), -half, max_relative = 1e-8);
        assert_relative_eq!(ls[0].hi.ln(), half, max_relative = 1e-8);
    }

    #[test]
    fn divergence_at_origin() {
        // (1/2r)(2 + 2/(1 + 4r²))
        let f = |r: f64| Ok((2.0 + 2.0 / (1.0 + 4.0 * r * r)) / (2.0 * r));
        let res = sup_over_r(&f, &opts()).unwrap();
        assert_eq!(res.sup, f64::INFINITY);
        assert!(!res.attained);
        assert_eq!(res.location, Location::Limit(Limit::RToZero));
        assert_eq!(res.left, Boundary::Divergent);
        assert!(level_set(&f, &res.samples, res.sup, 1e-3, 1e-8).unwrap().is_empty());
    }

    #[test]
    fn saturating_limit_is_finite() {
        let f = |r: f64| Ok(2.0 - r * r / (1.0 + r * r));
        let res = sup_over_r(&f, &opts()).unwrap();
        assert_eq!(res.location, Location::Limit(Limit::RToZero));
        assert_eq!(res.left, Boundary::Saturating);
        assert_relative_eq!(res.sup, 2.0, max_relative = 1e-11);
        assert!(!res.attained);
    }

    #[test]
    fn two_equal_bumps() {
        let bump = |x: f64, c: f64| (-(x - c).powi(2) * 4.0).exp();
        let f = |r: f64| Ok(bump(r.ln(), -2.0) + bump(r.ln(), 3.0));
        let res = sup_over_r(&f, &opts()).unwrap();
        match &res.location {
            Location::Points(rs) => assert_eq!(rs.len(), 2),
            other => panic!("{other:?}"),
        }
        let ls = level_set(&f, &res.samples, res.sup, 0.05, 1e-10).unwrap();
        assert_eq!(ls.len(), 2);
        assert!(ls[0].hi < ls[1].lo);
        assert!(ls[0].contains((-2f64).exp()) && ls[1].contains(3f64.exp()));
    }

    #[test]
    fn failing_points_are_skipped() {
        let f = |r: f64| {
            if r < 1e-3 {
                Err(Error::domain("test", "out of range"))
            } else {
                Ok((-(r.ln()).powi(2)).exp())
            }
        };
        let res = sup_over_r(&f, &opts()).unwrap();
        assert!(res.failures > 0);
        assert_relative_eq!(res.sup, 1.0, max_relative = 1e-15);
        let all_fail = |_: f64| -> Result<f64> { Err(Error::domain("test", "nope")) };
        assert!(matches!(sup_over_r(&all_fail, &opts()), Err(Error::AllPointsFailed(_))));
    }

    #[test]
    fn level_set_boundaries_are_tight() {
        let f = |r: f64| Ok(1.0 / (1.0 + (r.ln() - 0.5).powi(2)));
        let res = sup_over_r(&f, &opts()).unwrap();
        let eps = 0.2;
        let tol = 1e-9;
        let ls = level_set(&f, &res.samples, res.sup, eps, tol).unwrap();
        assert_eq!(ls.len(), 1);
        let iv = ls[0];
        assert!(f(iv.log_mid()).unwrap() >= res.sup - eps);
        assert!(f((iv.lo.ln() - 2.0 * tol).exp()).unwrap() < res.sup - eps);
        assert!(f((iv.hi.ln() + 2.0 * tol).exp()).unwrap() < res.sup - eps);
    }

    #[test]
    fn rejects_bad_options() {
        let mut o = opts();
        o.r_min = 0.0;
        assert!(sup_over_r(&|_| Ok(1.0), &o).is_err());
        assert!(level_set(&|_| Ok(1.0), &[(1.0, 1.0)], 1.0, 0.0, 1e-8).is_err());
    }
}
