use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::weights::{Table, WeightKind, WeightSpec};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Dispersion relation `φ` with its derivative.
#[derive(Clone)]
pub enum Dispersion {
    /// `φ(r) = r²`
    Schrodinger,
    /// `φ(r) = √(r² + m²)`
    Relativistic { m: f64 },
    Custom { name: String, phi: RealFn, dphi: RealFn },
}

impl Dispersion {
    pub fn phi(&self, r: f64) -> f64 {
        match self {
            Dispersion::Schrodinger => r * r,
            Dispersion::Relativistic { m } => r.hypot(*m),
            Dispersion::Custom { phi, .. } => phi(r),
        }
    }

    pub fn dphi(&self, r: f64) -> f64 {
        match self {
            Dispersion::Schrodinger => 2.0 * r,
            Dispersion::Relativistic { m } => r / r.hypot(*m),
            Dispersion::Custom { dphi, .. } => dphi(r),
        }
    }

    /// The Dirac mass, if `φ` is relativistic.
    pub fn mass(&self) -> Option<f64> {
        match self {
            Dispersion::Relativistic { m } => Some(*m),
            _ => None,
        }
    }

    /// `r2` or `rel:m=<m>`.
    pub fn parse(key: &str) -> Result<Self> {
        match key {
            "r2" | "schrodinger" => Ok(Dispersion::Schrodinger),
            _ => {
                let rest = key
                    .strip_prefix("rel:")
                    .ok_or_else(|| Error::Parse(format!("unknown dispersion '{key}' (expected r2 or rel:m=<m>)")))?;
                let m = rest
                    .strip_prefix("m=")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse(format!("cannot read mass from '{key}'")))?;
                if !(m >= 0.0 && m.is_finite()) {
                    return Err(Error::domain("Dispersion", format!("mass {m} must be non-negative")));
                }
                Ok(Dispersion::Relativistic { m })
            }
        }
    }
}

impl fmt::Debug for Dispersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Dispersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dispersion::Schrodinger => write!(f, "r2"),
            Dispersion::Relativistic { m } => write!(f, "rel:m={m}"),
            Dispersion::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

/// Smoothing function `ψ`.
#[derive(Clone)]
pub enum Smoothing {
    /// `ψ ≡ 1`
    One,
    /// `ψ(r) = r^{1-s/2} (r² + m²)^{-1/4}`, for power weights `r^{-s}` and
    /// relativistic `φ`.
    TheoremExplicit,
    /// `ψ² = r^{1-s} |φ'(r)|`, for power weights, which makes every `λ_k` constant.
    Matched,
    /// `ψ(r) = r^p`
    Power { p: f64 },
    /// `ψ(r) = r^p e^{-b r²}`
    PowExp { p: f64, b: f64 },
    /// Samples `(r, ψ(r))`, monotone cubic in between.
    Tabulated(Arc<Table>),
    Custom { name: String, psi: RealFn },
}

impl Smoothing {
    /// `one`, `theorem-explicit`, `matched`, `power:p=<p>`, `powexp:p=<p>,b=<b>`
    /// or `expr:<csv file>` with columns `r, ψ(r)`.
    pub fn parse(key: &str) -> Result<Self> {
        let (name, rest) = key.split_once(':').unwrap_or((key, ""));
        let params = |rest: &str| -> Result<Vec<(String, f64)>> {
            rest.split(',')
                .filter(|p| !p.is_empty())
                .map(|p| {
                    let (k, v) = p
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("expected name=value in psi key, got '{p}'")))?;
                    let v = v
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("'{v}' is not a number in psi key")))?;
                    Ok((k.trim().to_string(), v))
                })
                .collect()
        };
        let get = |ps: &[(String, f64)], n: &str| {
            ps.iter()
                .find(|(k, _)| k == n)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::Parse(format!("psi '{name}' needs parameter {n}")))
        };
        match name {
            "one" | "1" => Ok(Smoothing::One),
            "theorem-explicit" => Ok(Smoothing::TheoremExplicit),
            "matched" => Ok(Smoothing::Matched),
            "power" => Ok(Smoothing::Power {
                p: get(&params(rest)?, "p")?,
            }),
            "powexp" => {
                let ps = params(rest)?;
                let b = get(&ps, "b")?;
                if b < 0.0 {
                    return Err(Error::domain("Smoothing", format!("powexp needs b >= 0, got {b}")));
                }
                Ok(Smoothing::PowExp { p: get(&ps, "p")?, b })
            }
            "expr" | "table" => {
                let t = Table::from_csv(Path::new(rest))?;
                if t.ys().iter().any(|&v| v < 0.0) {
                    return Err(Error::domain("Smoothing", "tabulated psi takes negative values"));
                }
                Ok(Smoothing::Tabulated(Arc::new(t)))
            }
            other => Err(Error::Parse(format!("unknown psi '{other}'"))),
        }
    }
}

impl fmt::Debug for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Smoothing::One => write!(f, "one"),
            Smoothing::TheoremExplicit => write!(f, "theorem-explicit"),
            Smoothing::Matched => write!(f, "matched"),
            Smoothing::Power { p } => write!(f, "power:p={p}"),
            Smoothing::PowExp { p, b } => write!(f, "powexp:p={p},b={b}"),
            Smoothing::Tabulated(t) => write!(f, "table[{} rows]", t.xs().len()),
            Smoothing::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

/// A weight/smoothing/dispersion triple on `ℝ^d`.
#[derive(Debug, Clone)]
pub struct SmoothingProblem {
    pub d: usize,
    pub weight: WeightSpec,
    pub psi: Smoothing,
    pub phi: Dispersion,
}

impl SmoothingProblem {
    pub fn new(d: usize, weight: WeightSpec, psi: Smoothing, phi: Dispersion) -> Result<Self> {
        let p = Self { d, weight, psi, phi };
        p.validate()?;
        Ok(p)
    }

    /// Checks the triple against the admissibility conditions that can be
    /// tested pointwise.
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::domain("SmoothingProblem", "dimension must be at least 1"));
        }
        if self.weight.d != self.d {
            return Err(Error::domain(
                "SmoothingProblem",
                format!("weight lives in d = {} but the problem has d = {}", self.weight.d, self.d),
            ));
        }
        if self.d == 1 {
            self.weight.l1_norm_1d()?;
        }
        if let WeightKind::Power { s } = self.weight.kind {
            if self.d >= 2 && s <= 1.0 {
                return Err(Error::domain(
                    "SmoothingProblem",
                    format!("power weight with s = {s} <= 1 makes the multipliers diverge"),
                ));
            }
        }
        let power_s = match self.weight.kind {
            WeightKind::Power { s } => Some(s),
            _ => None,
        };
        match &self.psi {
            Smoothing::Matched if power_s.is_none() => {
                return Err(Error::domain("SmoothingProblem", "psi 'matched' needs a power weight"));
            }
            Smoothing::TheoremExplicit => {
                if power_s.is_none() {
                    return Err(Error::domain("SmoothingProblem", "psi 'theorem-explicit' needs a power weight"));
                }
                if self.phi.mass().is_none() {
                    return Err(Error::domain(
                        "SmoothingProblem",
                        "psi 'theorem-explicit' needs a relativistic dispersion",
                    ));
                }
            }
            _ => {}
        }
        if let Dispersion::Custom { .. } = self.phi {
            // φ' must keep one sign on the scan window for φ to be injective
            let mut sign = 0.0;
            for i in 0..=240 {
                let r = 10f64.powf(-6.0 + 0.05 * i as f64);
                let dp = self.phi.dphi(r);
                if !dp.is_finite() || dp == 0.0 || (sign != 0.0 && dp.signum() != sign) {
                    return Err(Error::domain("SmoothingProblem", format!("phi' vanishes or changes sign near r = {r}")));
                }
                sign = dp.signum();
            }
        }
        Ok(())
    }

    /// Dirac mass `m` (zero unless `φ` is relativistic).
    pub fn mass(&self) -> f64 {
        self.phi.mass().unwrap_or(0.0)
    }

    fn power_s(&self) -> Option<f64> {
        match self.weight.kind {
            WeightKind::Power { s } => Some(s),
            _ => None,
        }
    }

    /// `ψ(r)`.
    pub fn psi(&self, r: f64) -> Result<f64> {
        Ok(match &self.psi {
            Smoothing::One => 1.0,
            Smoothing::TheoremExplicit => {
                let s = self.power_s().unwrap_or(f64::NAN);
                r.powf(1.0 - s / 2.0) * (r * r + self.mass().powi(2)).powf(-0.25)
            }
            Smoothing::Matched => {
                let s = self.power_s().unwrap_or(f64::NAN);
                (r.powf(1.0 - s) * self.phi.dphi(r).abs()).sqrt()
            }
            Smoothing::Power { p } => r.powf(*p),
            Smoothing::PowExp { p, b } => r.powf(*p) * (-b * r * r).exp(),
            Smoothing::Tabulated(t) => t.eval(r)?,
            Smoothing::Custom { psi, .. } => psi(r),
        })
    }

    /// `r^{d-1} ψ(r)² / |φ'(r)|`.
    pub fn prefactor(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::domain("prefactor", format!("r = {r} must be positive")));
        }
        let dphi = self.phi.dphi(r).abs();
        if dphi == 0.0 || !dphi.is_finite() {
            return Err(Error::Singular { r });
        }
        let psi = self.psi(r)?;
        if !(psi >= 0.0) || !psi.is_finite() {
            return Err(Error::domain("psi", format!("psi({r}) = {psi} is not a finite non-negative number")));
        }
        // matched ψ² cancels |φ'| exactly; skip the round trip
        let ratio = match self.psi {
            Smoothing::Matched => r.powf(1.0 - self.power_s().unwrap_or(f64::NAN)),
            _ => psi * psi / dphi,
        };
        Ok(r.powi(self.d as i32 - 1) * ratio)
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        format!("d={} weight={} psi={} phi={}", self.d, self.weight, self.psi, self.phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn parse_dispersions() {
        assert!(matches!(Dispersion::parse("r2").unwrap(), Dispersion::Schrodinger));
        assert_eq!(Dispersion::parse("rel:m=2.5").unwrap().mass(), Some(2.5));
        assert!(Dispersion::parse("rel:m=-1").is_err());
        assert!(Dispersion::parse("klein").is_err());
    }

    #[test]
    fn parse_smoothing() {
        assert!(matches!(Smoothing::parse("one").unwrap(), Smoothing::One));
        assert!(matches!(Smoothing::parse("powexp:p=1.5,b=0.5").unwrap(), Smoothing::PowExp { .. }));
        assert!(Smoothing::parse("powexp:p=1").is_err());
        assert!(Smoothing::parse("expr:/nonexistent/file.csv").is_err());
    }

    #[test]
    fn theorem_explicit_equals_matched_for_relativistic() {
        let w = WeightSpec::power(3, 2.0).unwrap();
        let phi = Dispersion::Relativistic { m: 1.3 };
        let a = SmoothingProblem::new(3, w.clone(), Smoothing::TheoremExplicit, phi.clone()).unwrap();
        let b = SmoothingProblem::new(3, w, Smoothing::Matched, phi).unwrap();
        for &r in &[1e-3, 0.2, 1.0, 7.0, 1e3] {
            assert_relative_eq!(a.prefactor(r).unwrap(), b.prefactor(r).unwrap(), max_relative = 1e-13);
        }
    }

    #[test]
    fn validation() {
        let w1 = WeightSpec::exponential(1, 1.0).unwrap();
        assert!(SmoothingProblem::new(1, w1.clone(), Smoothing::One, Dispersion::Schrodinger).is_ok());
        assert!(SmoothingProblem::new(2, w1.clone(), Smoothing::One, Dispersion::Schrodinger).is_err());
        assert!(SmoothingProblem::new(1, w1, Smoothing::Matched, Dispersion::Schrodinger).is_err());
        let p = WeightSpec::power(3, 2.0).unwrap();
        assert!(SmoothingProblem::new(3, p.clone(), Smoothing::TheoremExplicit, Dispersion::Schrodinger).is_err());
        let bad = Dispersion::Custom {
            name: "cos".into(),
            phi: Arc::new(|r: f64| r.sin()),
            dphi: Arc::new(|r: f64| r.cos()),
        };
        assert!(SmoothingProblem::new(3, p, Smoothing::One, bad).is_err());
        assert!(SmoothingProblem::new(2, WeightSpec::power(2, 0.8).unwrap(), Smoothing::One, Dispersion::Schrodinger).is_err());
    }
}
