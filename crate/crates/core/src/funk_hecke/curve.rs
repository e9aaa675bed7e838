use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{lambda_k, SmoothingProblem};
use crate::dirac::{lambda_tilde_1d, lambda_tilde_2d, lambda_tilde_rad};
use crate::error::{Error, Result};

/// Which `λ`-type function a curve samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variant {
    SchrodingerK { k: usize },
    #[serde(rename = "dirac_1d")]
    Dirac1d,
    #[serde(rename = "dirac_2d_k")]
    Dirac2dK { k: usize },
    DiracRadial,
}

impl Variant {
    /// Checks that the variant makes sense for the problem.
    pub fn check(&self, problem: &SmoothingProblem) -> Result<()> {
        let need_rel = || {
            problem.phi.mass().map(|_| ()).ok_or_else(|| {
                Error::domain("Variant", format!("{self} needs a relativistic dispersion, got {}", problem.phi))
            })
        };
        match self {
            Variant::SchrodingerK { .. } => Ok(()),
            Variant::Dirac1d if problem.d == 1 => need_rel(),
            Variant::Dirac2dK { .. } if problem.d == 2 => need_rel(),
            Variant::DiracRadial if problem.d >= 2 => need_rel(),
            _ => Err(Error::domain("Variant", format!("{self} is not defined for d = {}", problem.d))),
        }
    }

    /// Value of the curve at `r`.
    pub fn eval(&self, problem: &SmoothingProblem, r: f64) -> Result<f64> {
        match *self {
            Variant::SchrodingerK { k } => lambda_k(problem, k, r),
            Variant::Dirac1d => lambda_tilde_1d(problem, r),
            Variant::Dirac2dK { k } => lambda_tilde_2d(problem, k, r),
            Variant::DiracRadial => lambda_tilde_rad(problem, r),
        }
    }

    /// The same variant at another index `k`, where that makes sense.
    pub fn with_k(&self, k: usize) -> Self {
        match self {
            Variant::SchrodingerK { .. } => Variant::SchrodingerK { k },
            Variant::Dirac2dK { .. } => Variant::Dirac2dK { k },
            other => *other,
        }
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            Variant::SchrodingerK { k } | Variant::Dirac2dK { k } => Some(*k),
            _ => None,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::SchrodingerK { k } => write!(f, "schrodinger_k(k={k})"),
            Variant::Dirac1d => write!(f, "dirac_1d"),
            Variant::Dirac2dK { k } => write!(f, "dirac_2d_k(k={k})"),
            Variant::DiracRadial => write!(f, "dirac_radial"),
        }
    }
}

/// Samples of a `λ` curve on an increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaCurve {
    pub variant: Variant,
    pub r_grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl LambdaCurve {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// CSV with header `r,value`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["r", "value"])?;
        for (r, v) in self.r_grid.iter().zip(&self.values) {
            w.write_record([r.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": "kysmooth.curve/v1",
            "variant": self.variant,
            "r": self.r_grid,
            "value": self.values,
        })
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::domain("sample_curve", "grid points must be positive and finite"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("sample_curve", "grid must be strictly increasing"));
    }
    Ok(())
}

/// Evaluates `variant` at every grid point (in parallel with the `parallel`
/// feature). Any failing point rejects the whole curve, listing all failures.
pub fn sample_curve(problem: &SmoothingProblem, variant: Variant, r_grid: &[f64]) -> Result<LambdaCurve> {
    check_grid(r_grid)?;
    variant.check(problem)?;
    let eval = |&r: &f64| -> std::result::Result<f64, String> {
        match variant.eval(problem, r) {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(v) => Err(format!("non-finite value {v}")),
            Err(e) => Err(e.to_string()),
        }
    };
    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        r_grid.par_iter().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = r_grid.iter().map(eval).collect();

    let mut values = Vec::with_capacity(r_grid.len());
    let mut failures = Vec::new();
    for (r, res) in r_grid.iter().zip(results) {
        match res {
            Ok(v) => values.push(v),
            Err(msg) => failures.push((*r, msg)),
        }
    }
    if !failures.is_empty() {
        return Err(Error::CurveRejected {
            total: r_grid.len(),
            failures,
        });
    }
    Ok(LambdaCurve {
        variant,
        r_grid: r_grid.to_vec(),
        values,
    })
}

/// `n` points log-spaced on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let mut g: Vec<f64> = (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
            g[0] = lo;
            g[n - 1] = hi;
            g
        }
    }
}
