//! Spatial weights `w(|x|)` and their Fourier profiles `F_w`, where
//! `ŵ(ξ) = F_w(|ξ|²/2)`.

mod fourier;
mod table;

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

pub use fourier::{angular_kernel, fourier_oracle, fourier_oracle_power, fourier_oracle_radial};
pub use table::Table;

use crate::error::{Error, Result};
use crate::specfun::log_gamma_ratio;

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    /// `w(ρ) = ρ^{-s}`
    Power { s: f64 },
    /// `w(ρ) = e^{-aρ²}`
    Gaussian { a: f64 },
    /// `w(ρ) = e^{-aρ}`
    Exponential { a: f64 },
    /// `F_w` given by samples `(u, F_w(u))`.
    Tabulated(Arc<Table>),
}

/// A weight on `ℝ^d`, optionally multiplied by a positive constant.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    pub kind: WeightKind,
    pub d: usize,
    pub scale: f64,
}

/// Outcome of the admissibility test applied to `F_w`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// Exponent `γ` of the behaviour `F_w(u) ~ u^γ` as `u → 0⁺` (0 if bounded).
    pub origin_exponent: f64,
    pub note: String,
}

impl WeightSpec {
    pub fn power(d: usize, s: f64) -> Result<Self> {
        Self::new(WeightKind::Power { s }, d)
    }

    pub fn gaussian(d: usize, a: f64) -> Result<Self> {
        Self::new(WeightKind::Gaussian { a }, d)
    }

    pub fn exponential(d: usize, a: f64) -> Result<Self> {
        Self::new(WeightKind::Exponential { a }, d)
    }

    pub fn tabulated(d: usize, table: Table) -> Result<Self> {
        Self::new(WeightKind::Tabulated(Arc::new(table)), d)
    }

    pub fn new(kind: WeightKind, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("WeightSpec", "dimension must be at least 1"));
        }
        match &kind {
            WeightKind::Power { s } if !(*s > 0.0 && *s < d as f64) => {
                return Err(Error::domain("WeightSpec", format!("power weight needs 0 < s < d, got s={s}, d={d}")));
            }
            WeightKind::Gaussian { a } | WeightKind::Exponential { a } if !(*a > 0.0 && a.is_finite()) => {
                return Err(Error::domain("WeightSpec", format!("parameter a={a} must be positive")));
            }
            WeightKind::Tabulated(t) if t.ys().iter().any(|&v| v < 0.0) && d == 1 => {
                return Err(Error::domain("WeightSpec", "tabulated F_w takes negative values"));
            }
            _ => {}
        }
        Ok(Self { kind, d, scale: 1.0 })
    }

    /// The weight `c·w`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain("WeightSpec::scaled", format!("scale {c} must be positive")));
        }
        Ok(Self {
            scale: self.scale * c,
            ..self.clone()
        })
    }

    /// Parses catalog keys such as `power:s=2`, `gauss:a=1`, `exp:a=0.5` or
    /// `table:path.csv`. A trailing `,c=<x>` multiplies the weight by `x`.
    pub fn parse(key: &str, d: usize) -> Result<Self> {
        let (name, rest) = key.split_once(':').unwrap_or((key, ""));
        if matches!(name, "table" | "tabulated") {
            return Self::tabulated(d, Table::from_csv(Path::new(rest))?);
        }
        let mut s = None;
        let mut a = None;
        let mut c = 1.0;
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected name=value in weight key, got '{part}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("'{v}' is not a number in weight key")))?;
            match k.trim() {
                "s" => s = Some(v),
                "a" => a = Some(v),
                "c" | "scale" => c = v,
                other => return Err(Error::Parse(format!("unknown weight parameter '{other}'"))),
            }
        }
        let need = |p: Option<f64>, n: &str| p.ok_or_else(|| Error::Parse(format!("weight '{name}' needs parameter {n}")));
        let spec = match name {
            "power" => Self::power(d, need(s, "s")?)?,
            "gauss" | "gaussian" => Self::gaussian(d, need(a, "a")?)?,
            "exp" | "exponential" => Self::exponential(d, need(a, "a")?)?,
            other => return Err(Error::Parse(format!("unknown weight kind '{other}'"))),
        };
        if c == 1.0 {
            Ok(spec)
        } else {
            spec.scaled(c)
        }
    }

    /// `F_w(u)`.
    pub fn eval_fw(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return Err(Error::domain("eval_Fw", format!("u = {u} must be non-negative")));
        }
        let d = self.d as f64;
        let v = match &self.kind {
            WeightKind::Power { s } => {
                if u == 0.0 {
                    return Err(Error::domain("eval_Fw", "power weight F_w is singular at u = 0"));
                }
                (self.power_log_constant(*s)? + (s - d) / 2.0 * (2.0 * u).ln()).exp()
            }
            WeightKind::Gaussian { a } => (PI / a).powf(d / 2.0) * (-u / (2.0 * a)).exp(),
            WeightKind::Exponential { a } => {
                let c = (d * 2f64.ln() + (d - 1.0) / 2.0 * PI.ln() + libm::lgamma((d + 1.0) / 2.0)).exp();
                c * a * (a * a + 2.0 * u).powf(-(d + 1.0) / 2.0)
            }
            WeightKind::Tabulated(t) => t.eval(u)?,
        };
        Ok(self.scale * v)
    }

    /// `ln(2^{d-s} π^{d/2} Γ((d-s)/2) / Γ(s/2))`.
    fn power_log_constant(&self, s: f64) -> Result<f64> {
        let d = self.d as f64;
        Ok((d - s) * 2f64.ln() + d / 2.0 * PI.ln() + log_gamma_ratio(&[(d - s) / 2.0], &[s / 2.0])?)
    }

    /// `w(ρ)` for the closed-form kinds; `None` for tabulated weights.
    pub fn profile(&self, rho: f64) -> Option<f64> {
        let rho = rho.abs();
        let v = match &self.kind {
            WeightKind::Power { s } => rho.powf(-s),
            WeightKind::Gaussian { a } => (-a * rho * rho).exp(),
            WeightKind::Exponential { a } => (-a * rho).exp(),
            WeightKind::Tabulated(_) => return None,
        };
        Some(self.scale * v)
    }

    /// `‖w‖_{L¹(ℝ)}`, only for `d = 1`.
    pub fn l1_norm_1d(&self) -> Result<f64> {
        if self.d != 1 {
            return Err(Error::Unsupported(format!("L1 norm on the line requested for d = {}", self.d)));
        }
        match &self.kind {
            WeightKind::Power { .. } => Err(Error::Unsupported("power weights are not integrable on the line".into())),
            WeightKind::Gaussian { a } => Ok(self.scale * (PI / a).sqrt()),
            WeightKind::Exponential { a } => Ok(self.scale * 2.0 / a),
            WeightKind::Tabulated(t) => {
                if t.domain().0 != 0.0 {
                    return Err(Error::Unsupported("tabulated F_w must start at u = 0 to give the L1 norm".into()));
                }
                Ok(self.scale * t.ys()[0])
            }
        }
    }

    /// Interpolation knots in `u` for tabulated weights.
    pub fn knots(&self) -> Option<&[f64]> {
        match &self.kind {
            WeightKind::Tabulated(t) => Some(t.xs()),
            _ => None,
        }
    }

    /// Exponent `γ` with `F_w(u) ∝ u^γ` near the origin (power weights only).
    pub fn singular_exponent(&self) -> f64 {
        match self.kind {
            WeightKind::Power { s } => (s - self.d as f64) / 2.0,
            _ => 0.0,
        }
    }

    /// Characteristic `u` over which `F_w` varies appreciably.
    pub fn u_scale(&self) -> f64 {
        match &self.kind {
            WeightKind::Power { .. } => 1.0,
            WeightKind::Gaussian { a } => 2.0 * a,
            WeightKind::Exponential { a } => a * a / 2.0,
            WeightKind::Tabulated(t) => {
                let (lo, hi) = t.domain();
                (hi - lo).max(f64::MIN_POSITIVE) / t.xs().len() as f64
            }
        }
    }

    /// Admissibility of `F_w`: continuous on `(0, ∞)` with at worst a power
    /// singularity at the origin. Tabulated data are checked at the knots.
    pub fn admissibility(&self) -> Admissibility {
        match &self.kind {
            WeightKind::Power { s } => Admissibility {
                admissible: self.d >= 2,
                origin_exponent: self.singular_exponent(),
                note: if self.d >= 2 {
                    format!("F_w ~ u^{} at the origin, continuous on (0, inf)", (s - self.d as f64) / 2.0)
                } else {
                    "power weight is not integrable on the line".into()
                },
            },
            WeightKind::Tabulated(t) => {
                let finite = t.ys().iter().all(|v| v.is_finite());
                Admissibility {
                    admissible: finite,
                    origin_exponent: 0.0,
                    note: format!(
                        "tabulated on [{}, {}], monotone cubic between knots, no extrapolation",
                        t.domain().0,
                        t.domain().1
                    ),
                }
            }
            _ => Admissibility {
                admissible: true,
                origin_exponent: 0.0,
                note: "F_w smooth and bounded on [0, inf)".into(),
            },
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WeightKind::Power { s } => write!(f, "power:s={s}")?,
            WeightKind::Gaussian { a } => write!(f, "gauss:a={a}")?,
            WeightKind::Exponential { a } => write!(f, "exp:a={a}")?,
            WeightKind::Tabulated(t) => write!(f, "table[{} rows]", t.xs().len())?,
        }
        if self.scale != 1.0 {
            write!(f, ",c={}", self.scale)?;
        }
        Ok(())
    }
}

/// Free-function form of [`WeightSpec::eval_fw`].
pub fn eval_fw(spec: &WeightSpec, u: f64) -> Result<f64> {
    spec.eval_fw(u)
}

/// Free-function form of [`WeightSpec::l1_norm_1d`].
pub fn l1_norm_1d(spec: &WeightSpec) -> Result<f64> {
    spec.l1_norm_1d()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_at_origin_is_l1_norm() {
        let w = WeightSpec::exponential(1, 1.0).unwrap();
        assert_relative_eq!(w.eval_fw(0.0).unwrap(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(w.l1_norm_1d().unwrap(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(w.eval_fw(2.0).unwrap(), 0.4, max_relative = 1e-15);
    }

    #[test]
    fn gaussian_values() {
        let w = WeightSpec::gaussian(1, 1.0).unwrap();
        assert_relative_eq!(w.eval_fw(2.0).unwrap(), PI.sqrt() * (-1.0f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(w.l1_norm_1d().unwrap(), PI.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn l1_norm_matches_origin_value() {
        for w in [
            WeightSpec::gaussian(1, 0.7).unwrap(),
            WeightSpec::exponential(1, 2.5).unwrap().scaled(3.0).unwrap(),
        ] {
            assert_relative_eq!(w.l1_norm_1d().unwrap(), w.eval_fw(0.0).unwrap(), max_relative = 1e-10);
        }
    }

    #[test]
    fn power_value_and_singularity() {
        let w = WeightSpec::power(3, 2.0).unwrap();
        assert_relative_eq!(w.eval_fw(0.5).unwrap(), 2.0 * PI * PI, max_relative = 1e-14);
        assert!(w.eval_fw(0.0).is_err());
        assert!(w.l1_norm_1d().is_err());
        assert!(WeightSpec::power(3, 3.0).is_err());
        assert!(WeightSpec::power(1, 0.5).unwrap().l1_norm_1d().is_err());
    }

    #[test]
    fn parse_catalog_keys() {
        assert_eq!(WeightSpec::parse("power:s=2", 3).unwrap(), WeightSpec::power(3, 2.0).unwrap());
        assert_eq!(WeightSpec::parse("exp:a=1", 1).unwrap(), WeightSpec::exponential(1, 1.0).unwrap());
        assert_eq!(WeightSpec::parse("gauss:a=0.5", 2).unwrap(), WeightSpec::gaussian(2, 0.5).unwrap());
        let scaled = WeightSpec::parse("gauss:a=1,c=2", 1).unwrap();
        assert_relative_eq!(scaled.eval_fw(0.0).unwrap(), 2.0 * PI.sqrt(), max_relative = 1e-15);
        assert!(WeightSpec::parse("power", 3).is_err());
        assert!(WeightSpec::parse("cauchy:a=1", 1).is_err());
        assert!(WeightSpec::parse("exp:a=-1", 1).is_err());
        assert!(WeightSpec::parse("exp:b=1", 1).is_err());
    }

    #[test]
    fn display_roundtrips() {
        for key in ["power:s=2.5", "gauss:a=1", "exp:a=0.25,c=3"] {
            let w = WeightSpec::parse(key, 4).unwrap();
            assert_eq!(WeightSpec::parse(&w.to_string(), 4).unwrap(), w);
        }
    }

    #[test]
    fn tabulated_refuses_extrapolation() {
        let t = Table::new(vec![0.0, 1.0, 2.0], vec![2.0, 1.0, 0.5]).unwrap();
        let w = WeightSpec::tabulated(1, t).unwrap();
        assert_relative_eq!(w.l1_norm_1d().unwrap(), 2.0);
        assert!(matches!(w.eval_fw(3.0), Err(Error::Extrapolation { .. })));
    }
}
