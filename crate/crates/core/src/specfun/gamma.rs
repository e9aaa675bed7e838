//! Log-Gamma and products/ratios of Gamma values evaluated in log space.

use crate::error::{Error, Result};

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_gamma", format!("argument {x} must be positive")));
    }
    Ok(libm::lgamma(x))
}

/// `∏ Γ(num_i) / ∏ Γ(den_j)`, accumulated as a sum of logs and exponentiated once.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    Ok(log_gamma_ratio(num, den)?.exp())
}

/// Natural log of [`gamma_ratio`].
pub fn log_gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for &x in num {
        acc += log_gamma(x)?;
    }
    for &x in den {
        acc -= log_gamma(x)?;
    }
    Ok(acc)
}
