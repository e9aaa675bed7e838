//! Independent checks: brute-force sphere quadrature against harmonic
//! polynomials, direct space-time smoothing norms in one dimension, and
//! near-extremiser construction from a level set.

mod extremiser;
mod harmonic;
mod spacetime;
mod suites;

pub use extremiser::{
    build_near_extremiser, radial_norm_check, sharpness_sequence, Branch, DiracBranchProfile, NearExtremiser, NormCheck,
    EXTREMISER_SCHEMA,
};
pub use harmonic::{funk_hecke_bruteforce, random_direction, random_harmonic, Polynomial};
pub use suites::{run_suite, Check, Suite, SuiteReport, VERIFY_SCHEMA};
pub use spacetime::{
    decomposition_1d_dirac, decomposition_1d_schrodinger, dirac_quadratic_form, smoothing_norm_1d_dirac,
    smoothing_norm_1d_schrodinger, NormEstimate, Profile1D, SpaceTimeOptions,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::Interval;

/// `exp(-1/(1-u²))` on `(-1, 1)`, zero outside.
pub fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

/// `bump((r - center)/half_width)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bump {
    pub center: f64,
    pub half_width: f64,
}

impl Bump {
    pub fn new(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && center.is_finite() && half_width.is_finite()) {
            return Err(Error::domain("Bump", format!("invalid bump at {center} with half width {half_width}")));
        }
        Ok(Self { center, half_width })
    }

    pub fn eval(&self, r: f64) -> f64 {
        bump((r - self.center) / self.half_width)
    }

    pub fn support(&self) -> Interval {
        Interval {
            lo: self.center - self.half_width,
            hi: self.center + self.half_width,
        }
    }
}
