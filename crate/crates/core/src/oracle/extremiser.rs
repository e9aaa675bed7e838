//! Near-extremisers: bumps supported in the level set `E(ε)`, with the
//! ratio of the decomposed norm to `2π · sup λ · ‖f‖²`.

use nalgebra::{Complex, DVector};
use serde::Serialize;

use super::spacetime::{dirac_quadratic_form, support_integral};
use super::Bump;
use crate::dirac::{build_algebra, DiracAlgebra, QuadForm1D, SpinorProfile, C64};
use crate::error::{Error, Result};
use crate::funk_hecke::{SmoothingProblem, Variant};
use crate::optimize::{Argmax, Equation, Interval, OptimalConstantReport};

pub const EXTREMISER_SCHEMA: &str = "kysmooth.extremiser/v1";

/// `lhs = 2π∫λ|f₀|²`, `rhs = 2π·sup·‖f₀‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl NormCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, ratio: lhs / rhs }
    }
}

/// Compares the decomposed norm of a scalar profile with the bound `2π·sup·‖f₀‖²`.
pub fn radial_norm_check<G: Fn(f64) -> f64>(
    problem: &SmoothingProblem,
    variant: Variant,
    support: Interval,
    f0: G,
    sup: f64,
) -> Result<NormCheck> {
    variant.check(problem)?;
    let tau = 2.0 * std::f64::consts::PI;
    let mut err = None;
    let lhs = support_integral(support, |r| {
        let f = f0(r);
        if f == 0.0 {
            return 0.0;
        }
        match variant.eval(problem, r) {
            Ok(l) => l * f * f,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let norm = support_integral(support, |r| f0(r).powi(2))?;
    Ok(NormCheck::new(tau * lhs, tau * sup * norm))
}

/// Which eigenspace of `Q(r)` the spinor `(βf₀, αf₁)` is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Top,
    Bottom,
}

/// One-dimensional Dirac profile `(βf₀, αf₁)(r) = bump(r)·v(r)` with `v(r)` a
/// unit vector of the chosen eigenspace of `Q(r)`.
pub struct DiracBranchProfile<'a> {
    pub problem: &'a SmoothingProblem,
    pub alg: &'a DiracAlgebra,
    pub bump: Bump,
    pub branch: Branch,
}

impl DiracBranchProfile<'_> {
    /// `(f₀, f₁)` at `r`, recovered through `β² = α² = I`.
    pub fn components(&self, r: f64) -> Result<(DVector<C64>, DVector<C64>)> {
        let b = self.bump.eval(r);
        let zero = DVector::from_element(2, Complex::new(0.0, 0.0));
        if b == 0.0 {
            return Ok((zero.clone(), zero));
        }
        let q = QuadForm1D::new(self.problem, r)?;
        let basis = match self.branch {
            Branch::Top => q.top_eigenspace(),
            Branch::Bottom => q.bottom_eigenspace(),
        };
        let v = basis
            .first()
            .ok_or_else(|| Error::Eigen(format!("Q({r}) has a single eigenvalue; no bottom branch")))?;
        let p = DVector::from_vec(vec![Complex::new(b * v[0], 0.0), Complex::new(b * v[1], 0.0)]);
        let s = DVector::from_vec(vec![Complex::new(b * v[2], 0.0), Complex::new(b * v[3], 0.0)]);
        Ok((&self.alg.beta * p, &self.alg.alphas[0] * s))
    }

    /// `2π∫⟨Q(βf₀, αf₁), (βf₀, αf₁)⟩` against `2π·sup·‖f‖²`.
    pub fn norm_check(&self, sup: f64) -> Result<NormCheck> {
        let tau = 2.0 * std::f64::consts::PI;
        let support = self.bump.support();
        let mut err = None;
        let lhs = support_integral(support, |r| {
            let res = self.components(r).and_then(|(f0, f1)| {
                let q = QuadForm1D::new(self.problem, r)?;
                Ok(dirac_quadratic_form(&q, self.alg, &f0, &f1))
            });
            res.unwrap_or_else(|e| {
                err.get_or_insert(e);
                0.0
            })
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        // v(r) is a unit vector and β, α are unitary
        let norm = support_integral(support, |r| self.bump.eval(r).powi(2))?;
        Ok(NormCheck::new(tau * lhs, tau * sup * norm))
    }
}

/// A near-extremiser built from the level set of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearExtremiser {
    pub schema: &'static str,
    pub equation: Equation,
    pub d: usize,
    pub problem: String,
    pub k: Option<usize>,
    pub epsilon: Option<f64>,
    pub sup_value: f64,
    pub level_interval: Interval,
    pub bump: Bump,
    /// `lhs/rhs`; at least `1 - ε/sup` up to quadrature error.
    pub check: NormCheck,
    #[serde(skip)]
    pub profile: SpinorProfile,
}

impl NearExtremiser {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("extremiser serialises")
    }

    /// `r,f0_re,f0_im,...,f1_re,f1_im,...` rows of the unit-norm profile.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let n0 = self.profile.f0.first().map_or(0, |v| v.len());
        let n1 = self.profile.f1.as_ref().and_then(|f| f.first()).map_or(0, |v| v.len());
        let mut header = vec!["r".to_string()];
        for (name, n) in [("f0", n0), ("f1", n1)] {
            for c in 0..n {
                header.push(format!("{name}_{c}_re"));
                header.push(format!("{name}_{c}_im"));
            }
        }
        w.write_record(&header)?;
        for row in self.profile.rows() {
            let mut rec = vec![format!("{:e}", row.r)];
            rec.extend(row.f0.iter().chain(row.f1.iter().flatten()).map(|x| format!("{x:e}")));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Centre and half width of a bump inside `iv`, centred at `r` when given.
fn bump_in(iv: Interval, r: Option<f64>) -> Result<Bump> {
    let c = match r {
        Some(r) if r > iv.lo && r < iv.hi => r,
        _ => iv.log_mid(),
    };
    Bump::new(c, (c - iv.lo).min(iv.hi - c))
}

/// Picks the level-set interval holding the first argmax and places a bump in
/// it; the profile is normalised to unit `L²`.
pub fn build_near_extremiser(problem: &SmoothingProblem, report: &OptimalConstantReport) -> Result<NearExtremiser> {
    let sup = report
        .sup_value
        .ok_or_else(|| Error::EmptyLevelSet("the supremum is infinite".into()))?;
    let first = report
        .argmax
        .first()
        .ok_or_else(|| Error::EmptyLevelSet("report has no argmax".into()))?;
    let (k, at) = match *first {
        Argmax::Point { k, r } => (k, Some(r)),
        Argmax::Plateau { k, .. } | Argmax::Limit { k, .. } => (k, None),
    };
    let intervals = report.level_set_for(k);
    let iv = at
        .and_then(|r| intervals.iter().copied().find(|iv| iv.contains(r)))
        .or_else(|| intervals.first().copied())
        .ok_or_else(|| Error::EmptyLevelSet(format!("no level-set interval for k = {k:?}")))?;
    if !(iv.hi > iv.lo) {
        return Err(Error::EmptyLevelSet(format!("level set [{}, {}] has no interior", iv.lo, iv.hi)));
    }
    let raw = bump_in(iv, at)?;
    let unit = 1.0 / support_integral(raw.support(), |r| raw.eval(r).powi(2))?.sqrt();
    let variant = report.equation.variant(problem.d, k.unwrap_or(0))?;
    let grid: Vec<f64> = (0..=400)
        .map(|i| raw.center - raw.half_width + 2.0 * raw.half_width * i as f64 / 400.0)
        .collect();
    let scalar = |v: f64| DVector::from_element(1, Complex::new(v, 0.0));
    let (check, profile) = match (report.equation, problem.d) {
        (Equation::Dirac, 1) => {
            let alg = build_algebra(1)?;
            let p = DiracBranchProfile {
                problem,
                alg: &alg,
                bump: raw,
                branch: Branch::Top,
            };
            let mut f0 = Vec::with_capacity(grid.len());
            let mut f1 = Vec::with_capacity(grid.len());
            for &r in &grid {
                let (a, b) = p.components(r)?;
                f0.push(a * Complex::new(unit, 0.0));
                f1.push(b * Complex::new(unit, 0.0));
            }
            (p.norm_check(sup)?, SpinorProfile::new(grid, f0, Some(f1))?)
        }
        (Equation::Schrodinger, 1) => {
            let check = radial_norm_check(problem, variant, raw.support(), |r| raw.eval(r), sup)?;
            let on = grid.iter().map(|&r| scalar(unit * raw.eval(r)));
            let off = grid.iter().map(|_| scalar(0.0));
            let (f0, f1) = if k == Some(1) {
                (off.collect(), on.collect())
            } else {
                (on.collect(), off.collect())
            };
            (check, SpinorProfile::new(grid, f0, Some(f1))?)
        }
        _ => {
            let check = radial_norm_check(problem, variant, raw.support(), |r| raw.eval(r), sup)?;
            let f0 = grid.iter().map(|&r| scalar(unit * raw.eval(r))).collect();
            (check, SpinorProfile::new(grid, f0, None)?)
        }
    };
    Ok(NearExtremiser {
        schema: EXTREMISER_SCHEMA,
        equation: report.equation,
        d: problem.d,
        problem: report.problem.clone(),
        k,
        epsilon: report.epsilon,
        sup_value: sup,
        level_interval: iv,
        bump: raw,
        check,
        profile,
    })
}

/// Ratios of bumps centred at `r_star` with half widths `factor · r_star`.
pub fn sharpness_sequence(
    problem: &SmoothingProblem,
    variant: Variant,
    r_star: f64,
    sup: f64,
    factors: &[f64],
) -> Result<Vec<NormCheck>> {
    factors
        .iter()
        .map(|&h| {
            let b = Bump::new(r_star, h * r_star)?;
            radial_norm_check(problem, variant, b.support(), |r| b.eval(r), sup)
        })
        .collect()
}
