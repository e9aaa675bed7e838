//! Harmonic polynomials in coefficient form and a brute-force sphere
//! quadrature of `∫_{S^{d-1}} F(θ·ω) P(θ) dσ(θ)`.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::specfun::gauss_legendre;

/// Real polynomial in `d` variables, `Σ c_α x^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub d: usize,
    pub terms: BTreeMap<Vec<u32>, f64>,
}

fn multi_indices(d: usize, k: u32) -> Vec<Vec<u32>> {
    if d == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in multi_indices(d - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl Polynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(a, c)| c * a.iter().zip(x).map(|(&p, &xi)| xi.powi(p as i32)).product::<f64>())
            .sum()
    }

    /// Exact Laplacian on the coefficients.
    pub fn laplacian(&self) -> Polynomial {
        let mut terms = BTreeMap::new();
        for (a, c) in &self.terms {
            for j in 0..self.d {
                if a[j] >= 2 {
                    let mut b = a.clone();
                    b[j] -= 2;
                    *terms.entry(b).or_insert(0.0) += c * f64::from(a[j] * (a[j] - 1));
                }
            }
        }
        Polynomial { d: self.d, terms }
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms.keys().all(|a| a.iter().sum::<u32>() == k)
    }

    /// Checks that the polynomial is homogeneous of degree `k` with a
    /// Laplacian that vanishes to `1e-12` relative to its coefficients.
    pub fn check_harmonic(&self, k: u32) -> Result<()> {
        if !self.is_homogeneous(k) {
            return Err(Error::domain("Polynomial", format!("not homogeneous of degree {k}")));
        }
        let lap = self.laplacian().max_coeff();
        let scale = self.max_coeff() * f64::from((k * k).max(1));
        if lap > 1e-12 * scale {
            return Err(Error::domain(
                "Polynomial",
                format!("Laplacian has coefficient {lap:.3e} (scale {scale:.3e})"),
            ));
        }
        Ok(())
    }
}

fn unit_gaussian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Random point on `S^{d-1}`.
pub fn random_direction<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    unit_gaussian(d, rng)
}

/// `Re(c (z·x)^k)` for a random isotropic `z = a + ib` (`a ⊥ b`, `|a| = |b| = 1`)
/// and random complex `c`; harmonic because `z·z = 0`. Validated before return.
pub fn random_harmonic<R: Rng + ?Sized>(d: usize, k: u32, rng: &mut R) -> Result<Polynomial> {
    if d < 2 {
        return Err(Error::domain("random_harmonic", "need d >= 2"));
    }
    let a = unit_gaussian(d, rng);
    let b = loop {
        let v = unit_gaussian(d, rng);
        let dot: f64 = v.iter().zip(&a).map(|(x, y)| x * y).sum();
        let w: Vec<f64> = v.iter().zip(&a).map(|(x, y)| x - dot * y).collect();
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            break w.into_iter().map(|x| x / n).collect::<Vec<_>>();
        }
    };
    let (cr, ci): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
    let mut terms = BTreeMap::new();
    for alpha in multi_indices(d, k) {
        // multinomial · z^α
        let mut coef = factorial(k);
        let (mut zr, mut zi) = (1.0, 0.0);
        for (j, &p) in alpha.iter().enumerate() {
            coef /= factorial(p);
            for _ in 0..p {
                let (nr, ni) = (zr * a[j] - zi * b[j], zr * b[j] + zi * a[j]);
                zr = nr;
                zi = ni;
            }
        }
        let re = coef * (cr * zr - ci * zi);
        if re != 0.0 {
            terms.insert(alpha, re);
        }
    }
    let p = Polynomial { d, terms };
    p.check_harmonic(k)?;
    Ok(p)
}

/// `∫_{S^{d-1}} F(θ·ω) P(θ) dσ(θ)` for `d ∈ {2, 3}`: the trapezoid rule in the
/// angle on `S¹`, and Gauss–Legendre in `cos` of the polar angle times the
/// trapezoid rule in the azimuth on `S²`. Resolution doubles until two
/// estimates agree to `1e-12` of `∫|F P|`.
pub fn funk_hecke_bruteforce<F: Fn(f64) -> f64>(d: usize, f: F, p: &Polynomial, omega: &[f64]) -> Result<f64> {
    if p.d != d || omega.len() != d {
        return Err(Error::domain("funk_hecke_bruteforce", "dimension mismatch"));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let dot = |x: &[f64]| x.iter().zip(omega).map(|(a, b)| a * b).sum::<f64>().clamp(-1.0, 1.0);
    let estimate = |n: usize| -> Result<(f64, f64)> {
        let (mut v, mut m) = (0.0, 0.0);
        match d {
            2 => {
                for j in 0..n {
                    let th = tau * j as f64 / n as f64;
                    let x = [th.cos(), th.sin()];
                    let g = f(dot(&x)) * p.eval(&x);
                    v += g;
                    m += g.abs();
                }
                let h = tau / n as f64;
                Ok((v * h, m * h))
            }
            3 => {
                let rule = gauss_legendre(n)?;
                let na = 2 * n;
                for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let s = (1.0 - u * u).max(0.0).sqrt();
                    for j in 0..na {
                        let ph = tau * j as f64 / na as f64;
                        let x = [s * ph.cos(), s * ph.sin(), u];
                        let g = w * f(dot(&x)) * p.eval(&x);
                        v += g;
                        m += g.abs();
                    }
                }
                let h = tau / na as f64;
                Ok((v * h, m * h))
            }
            _ => Err(Error::Unsupported(format!("brute-force sphere quadrature for d = {d}"))),
        }
    };
    let (mut n, limit) = if d == 2 { (256, 1 << 15) } else { (32, 1024) };
    let (mut prev, _) = estimate(n)?;
    while n < limit {
        n *= 2;
        let (cur, mass) = estimate(n)?;
        if (cur - prev).abs() <= 1e-12 * mass {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature {
        op: "funk_hecke_bruteforce",
        msg: format!("budget exceeded at resolution {n} (d = {d})"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funk_hecke::mu_k;
    use crate::specfun::sphere_area;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn constant(d: usize, c: f64) -> Polynomial {
        Polynomial {
            d,
            terms: [(vec![0; d], c)].into_iter().collect(),
        }
    }

    fn coordinate(d: usize, j: usize) -> Polynomial {
        let mut a = vec![0; d];
        a[j] = 1;
        Polynomial {
            d,
            terms: [(a, 1.0)].into_iter().collect(),
        }
    }

    #[test]
    fn laplacian_of_monomials() {
        // Δ(x² y) = 2y
        let p = Polynomial {
            d: 2,
            terms: [(vec![2, 1], 1.0)].into_iter().collect(),
        };
        assert_eq!(p.laplacian(), coordinate(2, 1).scaled(2.0));
        assert!(p.check_harmonic(3).is_err());
    }

    impl Polynomial {
        fn scaled(mut self, c: f64) -> Self {
            self.terms.values_mut().for_each(|v| *v *= c);
            self
        }
    }

    #[test]
    fn random_harmonics_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..=4 {
            for k in 0..=6 {
                let p = random_harmonic(d, k, &mut rng).unwrap();
                assert!(p.is_homogeneous(k));
            }
        }
    }

    #[test]
    fn trivial_sphere_integrals() {
        for d in [2, 3] {
            let mut omega = vec![0.0; d];
            omega[0] = 1.0;
            let area = funk_hecke_bruteforce(d, |_| 1.0, &constant(d, 1.0), &omega).unwrap();
            assert!((area / sphere_area(d - 1) - 1.0).abs() < 1e-13);
            let odd = funk_hecke_bruteforce(d, |_| 1.0, &coordinate(d, 0), &omega).unwrap();
            assert!(odd.abs() < 1e-13);
        }
    }

    #[test]
    fn linear_kernel_circle() {
        let omega = [0.6, 0.8];
        let v = funk_hecke_bruteforce(2, |t| t, &coordinate(2, 0), &omega).unwrap();
        let mu1 = mu_k(2, 1, |t| t).unwrap();
        assert!((v - mu1 * 0.6).abs() < 1e-13);
        assert!((mu1 - std::f64::consts::PI).abs() < 1e-13);
    }
}
