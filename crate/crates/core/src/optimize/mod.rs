//! Optimal constants: `sup_k sup_r` of the `λ` curves, attainment and the
//! level sets `E(ε)` on which near-extremisers live.

mod search;

pub use search::{level_set, sup_over_r, Boundary, Interval, Limit, Location, RSupremum, SearchOptions, TIE_REL};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funk_hecke::{SmoothingProblem, Variant};

pub const CONSTANT_SCHEMA: &str = "kysmooth.constant/v1";

/// Stop the `k` loop after this many consecutive `k` below the running best.
const K_STOP_RUN: usize = 3;
const K_STOP_REL: f64 = 1e-6;
#[cfg(feature = "parallel")]
const K_BATCH: usize = 4;

/// Which smoothing estimate a constant belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    Schrodinger,
    /// general data; `d = 1` uses `λ̃`, `d = 2` the pairs `(λ_k, λ_{k+1})`
    Dirac,
    DiracRadial,
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schrodinger" => Ok(Equation::Schrodinger),
            "dirac" => Ok(Equation::Dirac),
            "dirac-radial" => Ok(Equation::DiracRadial),
            other => Err(Error::Parse(format!(
                "unknown equation '{other}' (expected schrodinger, dirac or dirac-radial)"
            ))),
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::Schrodinger => "schrodinger",
            Equation::Dirac => "dirac",
            Equation::DiracRadial => "dirac-radial",
        })
    }
}

impl Equation {
    /// The curve at index `k` (ignored by single-curve variants).
    pub fn variant(&self, d: usize, k: usize) -> Result<Variant> {
        match (self, d) {
            (Equation::Schrodinger, _) => Ok(Variant::SchrodingerK { k }),
            (Equation::Dirac, 1) => Ok(Variant::Dirac1d),
            (Equation::Dirac, 2) => Ok(Variant::Dirac2dK { k }),
            (Equation::Dirac, _) => Err(Error::Unsupported(format!(
                "the optimal constant for general Dirac data in d = {d} is not available; use dirac-radial"
            ))),
            (Equation::DiracRadial, 1) => Err(Error::domain("Equation", "dirac-radial needs d >= 2")),
            (Equation::DiracRadial, _) => Ok(Variant::DiracRadial),
        }
    }

    /// The set of `k` to search: `None` for an open-ended loop.
    fn k_range(&self, d: usize) -> Option<Vec<usize>> {
        match (self, d) {
            (Equation::Schrodinger, 1) => Some(vec![0, 1]),
            (Equation::Schrodinger, _) => None,
            (Equation::Dirac, 2) => None,
            _ => Some(vec![0]),
        }
    }
}

/// One entry of the argmax list.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Argmax {
    Point { k: Option<usize>, r: f64 },
    /// the curve is constant on the whole window
    Plateau { k: Option<usize>, r_lo: f64, r_hi: f64 },
    Limit { k: Option<usize>, direction: Limit },
}

/// Summary of the search on one curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSummary {
    pub variant: Variant,
    /// `null` when divergent.
    pub sup_value: Option<f64>,
    pub attained: bool,
    pub left: Boundary,
    pub right: Boundary,
    pub failed_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelInterval {
    pub k: Option<usize>,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMeta {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub spacing: &'static str,
    pub tol: f64,
    pub k_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalConstantReport {
    pub schema: &'static str,
    pub equation: Equation,
    pub d: usize,
    pub problem: String,
    /// `sup_k sup_r λ`; `null` when divergent.
    pub sup_value: Option<f64>,
    /// `2π · sup_value`, the squared operator norm.
    pub constant_2pi: Option<f64>,
    /// `sup_value / (2π)^{d-1}`.
    pub constant_fourier: Option<f64>,
    pub attained: bool,
    pub argmax: Vec<Argmax>,
    pub epsilon: Option<f64>,
    pub level_set: Vec<LevelInterval>,
    pub k_searched: Vec<usize>,
    pub curves: Vec<CurveSummary>,
    pub grid: GridMeta,
    pub admissibility: String,
    pub warnings: Vec<String>,
}

impl OptimalConstantReport {
    pub fn sup(&self) -> f64 {
        self.sup_value.unwrap_or(f64::INFINITY)
    }

    /// Level-set intervals belonging to curve index `k` (`None` for single curves).
    pub fn level_set_for(&self, k: Option<usize>) -> Vec<Interval> {
        self.level_set
            .iter()
            .filter(|iv| iv.k == k)
            .map(|iv| Interval { lo: iv.lo, hi: iv.hi })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialises")
    }
}

struct KResult {
    k: usize,
    variant: Variant,
    search: RSupremum,
}

fn search_k(problem: &SmoothingProblem, equation: Equation, k: usize, opts: &SearchOptions) -> Result<KResult> {
    let variant = equation.variant(problem.d, k)?;
    let f = |r: f64| variant.eval(problem, r);
    Ok(KResult {
        k,
        variant,
        search: sup_over_r(&f, opts)?,
    })
}

#[cfg(feature = "parallel")]
fn search_batch(problem: &SmoothingProblem, equation: Equation, ks: &[usize], opts: &SearchOptions) -> Vec<Result<KResult>> {
    use rayon::prelude::*;
    ks.par_iter().map(|&k| search_k(problem, equation, k, opts)).collect()
}

/// Runs the `k` loop with the truncation rule. Returns the per-`k` results in
/// order and whether the rule was satisfied before `k_max`.
fn k_loop(problem: &SmoothingProblem, equation: Equation, opts: &SearchOptions) -> Result<(Vec<KResult>, bool)> {
    if let Some(ks) = equation.k_range(problem.d) {
        let res = ks.iter().map(|&k| search_k(problem, equation, k, opts)).collect::<Result<Vec<_>>>()?;
        return Ok((res, true));
    }
    let mut out: Vec<KResult> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut below = 0;
    let mut next = 0;
    while next <= opts.k_max {
        #[cfg(feature = "parallel")]
        let batch = {
            let hi = (next + K_BATCH).min(opts.k_max + 1);
            let ks: Vec<usize> = (next..hi).collect();
            search_batch(problem, equation, &ks, opts)
        };
        #[cfg(not(feature = "parallel"))]
        let batch = vec![search_k(problem, equation, next, opts)];
        for res in batch {
            let res = res?;
            next = res.k + 1;
            let s = res.search.sup;
            if s < best - K_STOP_REL * best.abs() {
                below += 1;
            } else {
                below = 0;
            }
            best = best.max(s);
            out.push(res);
            if below >= K_STOP_RUN || s == f64::INFINITY {
                return Ok((out, true));
            }
        }
    }
    Ok((out, false))
}

/// `sup_k sup_r` of the curves of `equation` for `problem`.
///
/// The `k` loop (Schrödinger with `d ≥ 2`, Dirac with `d = 2`) starts at
/// `k = 0` and stops after three consecutive `k` whose supremum is below the
/// running best by a factor `1 - 1e-6`, or at `opts.k_max` with a warning.
/// All curves whose supremum ties the best within `1e-9` contribute argmax
/// entries; every curve within `ε` of the best contributes level-set intervals.
pub fn sup_over_k_and_r(problem: &SmoothingProblem, equation: Equation, opts: &SearchOptions) -> Result<OptimalConstantReport> {
    opts.validate()?;
    equation.variant(problem.d, 0)?.check(problem)?;
    let (results, stopped) = k_loop(problem, equation, opts)?;
    let looped = equation.k_range(problem.d).is_none();
    let tag = |k: usize| if looped || equation == Equation::Schrodinger { Some(k) } else { None };

    let sup = results.iter().map(|r| r.search.sup).fold(f64::NEG_INFINITY, f64::max);
    let mut warnings = Vec::new();
    let mut attained = false;
    let mut argmax = Vec::new();
    for res in results.iter().filter(|r| r.search.sup >= sup - TIE_REL * sup.abs() || r.search.sup == sup) {
        let k = tag(res.k);
        attained |= res.search.attained;
        match &res.search.location {
            Location::Points(rs) => argmax.extend(rs.iter().map(|&r| Argmax::Point { k, r })),
            Location::Plateau => argmax.push(Argmax::Plateau {
                k,
                r_lo: opts.r_min,
                r_hi: opts.r_max,
            }),
            Location::Limit(dir) => argmax.push(Argmax::Limit { k, direction: *dir }),
        }
    }
    if !stopped {
        let last = results.last().expect("k loop ran");
        warnings.push(format!(
            "k truncation not justified: stopping rule unmet at k = {}{}",
            last.k,
            if last.search.sup >= sup - TIE_REL * sup.abs() { " and sup still growing" } else { "" }
        ));
        let prev = results.iter().rev().nth(1).map(|r| r.search.sup).unwrap_or(f64::NEG_INFINITY);
        if last.search.sup >= sup - TIE_REL * sup.abs() && last.search.sup > prev {
            argmax.push(Argmax::Limit {
                k: None,
                direction: Limit::KToInfinity,
            });
            attained = false;
        }
    }

    let finite = sup.is_finite();
    let epsilon = finite.then(|| opts.eps_rel * sup.abs());
    let mut level = Vec::new();
    if let Some(eps) = epsilon {
        for res in results.iter().filter(|r| r.search.sup >= sup - eps) {
            let f = |r: f64| res.variant.eval(problem, r);
            for iv in level_set(&f, &res.search.samples, sup, eps, opts.tol)? {
                level.push(LevelInterval {
                    k: tag(res.k),
                    lo: iv.lo,
                    hi: iv.hi,
                });
            }
        }
        if level.is_empty() {
            warnings.push("level set is empty inside the search window".to_string());
        }
    } else {
        warnings.push("supremum diverges; level set is empty".to_string());
    }
    for res in &results {
        if res.search.failures > 0 {
            warnings.push(format!(
                "{}: {} of {} grid points failed ({})",
                res.variant,
                res.search.failures,
                opts.points,
                res.search.first_failure.as_deref().unwrap_or("")
            ));
        }
    }
    let adm = problem.weight.admissibility();
    let tau = 2.0 * std::f64::consts::PI;
    let sup_value = finite.then_some(sup);
    Ok(OptimalConstantReport {
        schema: CONSTANT_SCHEMA,
        equation,
        d: problem.d,
        problem: problem.describe(),
        sup_value,
        constant_2pi: sup_value.map(|s| tau * s),
        constant_fourier: sup_value.map(|s| s / tau.powi(problem.d as i32 - 1)),
        attained,
        argmax,
        epsilon,
        level_set: level,
        k_searched: results.iter().map(|r| r.k).collect(),
        curves: results
            .iter()
            .map(|r| CurveSummary {
                variant: r.variant,
                sup_value: r.search.sup.is_finite().then_some(r.search.sup),
                attained: r.search.attained,
                left: r.search.left,
                right: r.search.right,
                failed_points: r.search.failures,
            })
            .collect(),
        grid: GridMeta {
            r_min: opts.r_min,
            r_max: opts.r_max,
            points: opts.points,
            spacing: "log",
            tol: opts.tol,
            k_max: opts.k_max,
        },
        admissibility: adm.note,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funk_hecke::{Dispersion, Smoothing};
    use crate::weights::WeightSpec;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn coarse() -> SearchOptions {
        SearchOptions {
            points: 64,
            ..Default::default()
        }
    }

    #[test]
    fn power_family_maximises_at_k0() {
        let p = SmoothingProblem::new(3, WeightSpec::power(3, 2.0).unwrap(), Smoothing::Matched, Dispersion::Schrodinger)
            .unwrap();
        let rep = sup_over_k_and_r(&p, Equation::Schrodinger, &coarse()).unwrap();
        assert_relative_eq!(rep.sup(), (2.0 * PI).powi(3), max_relative = 1e-10);
        assert!(rep.attained);
        assert_eq!(rep.argmax.len(), 1);
        assert!(matches!(rep.argmax[0], Argmax::Plateau { k: Some(0), .. }));
        assert_eq!(rep.k_searched, vec![0, 1, 2, 3]);
        assert!(rep.warnings.is_empty(), "{:?}", rep.warnings);
        assert_eq!(rep.level_set.len(), 1);
    }

    #[test]
    fn one_dimensional_searches_two_curves() {
        let p = SmoothingProblem::new(1, WeightSpec::exponential(1, 1.0).unwrap(), Smoothing::One, Dispersion::Schrodinger)
            .unwrap();
        let rep = sup_over_k_and_r(&p, Equation::Schrodinger, &coarse()).unwrap();
        assert_eq!(rep.k_searched, vec![0, 1]);
        assert_eq!(rep.sup_value, None);
        assert!(!rep.attained);
        assert!(rep.argmax.contains(&Argmax::Limit {
            k: Some(0),
            direction: Limit::RToZero
        }));
        let json = rep.to_json();
        assert_eq!(json["schema"], CONSTANT_SCHEMA);
        assert!(json["sup_value"].is_null());
    }

    #[test]
    fn radial_dirac_has_no_k_loop() {
        let p = SmoothingProblem::new(
            3,
            WeightSpec::power(3, 2.0).unwrap(),
            Smoothing::TheoremExplicit,
            Dispersion::Relativistic { m: 1.0 },
        )
        .unwrap();
        let rep = sup_over_k_and_r(&p, Equation::DiracRadial, &coarse()).unwrap();
        assert_eq!(rep.k_searched, vec![0]);
        assert_relative_eq!(rep.constant_2pi.unwrap(), (2.0 * PI).powi(4), max_relative = 1e-9);
        assert!(!rep.attained, "{rep:#?}");
        assert_eq!(rep.argmax, vec![Argmax::Limit { k: None, direction: Limit::RToZero }]);
    }

    #[test]
    fn equation_checks() {
        assert!("dirac-radial".parse::<Equation>().is_ok());
        assert!("heat".parse::<Equation>().is_err());
        assert!(Equation::Dirac.variant(3, 0).is_err());
        assert!(Equation::DiracRadial.variant(1, 0).is_err());
        assert_eq!(Equation::Dirac.variant(2, 4).unwrap(), Variant::Dirac2dK { k: 4 });
    }
}
