use nalgebra::DVector;
use serde::Serialize;

use super::algebra::C64;
use crate::error::{Error, Result};

/// Radial spinor profile `(f₀, f₁)` sampled on a grid; `f₁` is absent for
/// radial data in `d ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorProfile {
    pub r_grid: Vec<f64>,
    pub f0: Vec<DVector<C64>>,
    pub f1: Option<Vec<DVector<C64>>>,
}

impl SpinorProfile {
    pub fn new(r_grid: Vec<f64>, f0: Vec<DVector<C64>>, f1: Option<Vec<DVector<C64>>>) -> Result<Self> {
        let n = r_grid.len();
        if f0.len() != n || f1.as_ref().is_some_and(|f| f.len() != n) {
            return Err(Error::domain("SpinorProfile", "component lengths differ from the grid"));
        }
        let finite = |v: &DVector<C64>| v.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !f0.iter().all(finite) || !f1.iter().flatten().all(finite) {
            return Err(Error::domain("SpinorProfile", "non-finite entries"));
        }
        Ok(Self { r_grid, f0, f1 })
    }

    /// `|f₀(r)|² + |f₁(r)|²` at grid point `i`.
    pub fn density(&self, i: usize) -> f64 {
        self.f0[i].norm_squared() + self.f1.as_ref().map_or(0.0, |f| f[i].norm_squared())
    }

    /// `∫ (|f₀|² + |f₁|²) dr` by the trapezoid rule on the grid.
    pub fn l2_norm_sq(&self) -> f64 {
        trapezoid(&self.r_grid, |i| self.density(i))
    }

    /// Plain `(r, |f₀|², |f₁|²)` rows for export.
    pub fn rows(&self) -> Vec<ProfileRow> {
        (0..self.r_grid.len())
            .map(|i| ProfileRow {
                r: self.r_grid[i],
                f0: self.f0[i].iter().flat_map(|z| [z.re, z.im]).collect(),
                f1: self.f1.as_ref().map(|f| f[i].iter().flat_map(|z| [z.re, z.im]).collect()),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub r: f64,
    /// interleaved real and imaginary parts
    pub f0: Vec<f64>,
    pub f1: Option<Vec<f64>>,
}

pub(crate) fn trapezoid(grid: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    grid.windows(2)
        .enumerate()
        .map(|(i, w)| 0.5 * (w[1] - w[0]) * (f(i) + f(i + 1)))
        .sum()
}
