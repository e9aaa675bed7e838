//! Legendre polynomials in `d` dimensions.
//!
//! `p_{d,k}` is the Gegenbauer polynomial `C_k^{(d-2)/2}` rescaled so that
//! `p_{d,k}(1) = 1`. For `d = 2` it is the Chebyshev polynomial `T_k`, for
//! `d = 3` the classical Legendre polynomial `P_k`. They are orthogonal on
//! `[-1, 1]` against `(1 - t²)^{(d-3)/2}`.
//!
//! The normalised three-term recurrence is
//!
//! ```text
//! p_0 = 1,  p_1 = t,
//! (k + d - 2) p_{k+1} = (2k + d - 2) t p_k - k p_{k-1}
//! ```
//!
//! At `t = 1` every step reduces to `(k + d - 2) / (k + d - 2)`, so the
//! normalisation holds exactly in floating point.

use crate::error::{Error, Result};

/// `p_{d,k}(t)` with argument checks.
pub fn legendre_d(d: usize, k: usize, t: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::domain("legendre_d", format!("dimension {d} < 2")));
    }
    if !(t.abs() <= 1.0) {
        return Err(Error::domain("legendre_d", format!("|t| = {} > 1", t.abs())));
    }
    Ok(legendre_unchecked(d, k, t))
}

/// Recurrence without argument validation. Callers guarantee `d >= 2`.
#[inline]
pub(crate) fn legendre_unchecked(d: usize, k: usize, t: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let dm2 = d as f64 - 2.0;
    let mut prev = 1.0;
    let mut cur = t;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + dm2) * t * cur - jf * prev) / (jf + dm2);
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `p_{d,0}(t), ..., p_{d,kmax}(t)` in one pass.
pub fn legendre_d_all(d: usize, kmax: usize, t: f64) -> Result<Vec<f64>> {
    legendre_d(d, 0, t)?;
    let dm2 = d as f64 - 2.0;
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax >= 1 {
        out.push(t);
    }
    for j in 1..kmax {
        let jf = j as f64;
        let next = ((2.0 * jf + dm2) * t * out[j] - jf * out[j - 1]) / (jf + dm2);
        out.push(next);
    }
    Ok(out)
}

/// A fixed `(d, k)` pair, evaluable at any `t ∈ [-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LegendreEval {
    pub d: usize,
    pub k: usize,
}

impl LegendreEval {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain("LegendreEval", format!("dimension {d} < 2")));
        }
        Ok(Self { d, k })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        legendre_d(self.d, self.k, t)
    }
}
