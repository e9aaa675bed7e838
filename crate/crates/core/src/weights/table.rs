//! Monotone piecewise-cubic (Fritsch–Carlson) interpolation of tabulated data.

use std::path::Path;

use crate::error::{Error, Result};

/// Samples `(x_i, y_i)` with strictly increasing `x` and PCHIP slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    x: Vec<f64>,
    y: Vec<f64>,
    slopes: Vec<f64>,
}

impl Table {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Parse(format!("table columns differ in length ({} vs {})", x.len(), y.len())));
        }
        if x.len() < 2 {
            return Err(Error::Parse("table needs at least two rows".into()));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::Parse("table contains non-finite entries".into()));
        }
        if x.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse("table abscissae must be strictly increasing".into()));
        }
        let slopes = pchip_slopes(&x, &y);
        Ok(Self { x, y, slopes })
    }

    /// Reads a headerless or headed two-column CSV. Non-numeric rows are skipped
    /// only if they are the first row.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() < 2 {
                return Err(Error::Parse(format!("{}: row {} has fewer than two columns", path.display(), i + 1)));
            }
            match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
                (Ok(a), Ok(b)) => {
                    x.push(a);
                    y.push(b);
                }
                _ if i == 0 => continue,
                _ => return Err(Error::Parse(format!("{}: row {} is not numeric", path.display(), i + 1))),
            }
        }
        Self::new(x, y)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn xs(&self) -> &[f64] {
        &self.x
    }

    pub fn ys(&self) -> &[f64] {
        &self.y
    }

    pub fn eval(&self, at: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(at >= lo && at <= hi) {
            return Err(Error::Extrapolation { x: at, lo, hi });
        }
        let i = match self.x.partition_point(|&v| v <= at) {
            0 => 0,
            p if p >= self.x.len() => self.x.len() - 2,
            p => p - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let t = (at - self.x[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Ok(h00 * self.y[i] + h10 * h * self.slopes[i] + h01 * self.y[i + 1] + h11 * h * self.slopes[i + 1])
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut m = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

// three-point one-sided estimate, clipped to preserve shape
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reproduces_knots_and_linear_data() {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.3).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let t = Table::new(x.clone(), y.clone()).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert_relative_eq!(t.eval(*a).unwrap(), *b, epsilon = 1e-14);
        }
        assert_relative_eq!(t.eval(1.05).unwrap(), 3.1, epsilon = 1e-14);
    }

    #[test]
    fn monotone_data_stays_monotone() {
        let x = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        let y = vec![10.0, 9.9, 2.0, 1.9, 0.0];
        let t = Table::new(x, y).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..=400 {
            let v = t.eval(i as f64 / 100.0).unwrap();
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn refuses_to_extrapolate() {
        let t = Table::new(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        assert!(matches!(t.eval(1.5), Err(Error::Extrapolation { .. })));
        assert!(matches!(t.eval(-0.1), Err(Error::Extrapolation { .. })));
    }

    #[test]
    fn rejects_unsorted() {
        assert!(Table::new(vec![0.0, 0.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
    }
}
