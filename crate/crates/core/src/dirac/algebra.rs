//! Hermitian matrices `α_1, …, α_d, β` with `{α_j, α_k} = 2δ_{jk}` (with
//! `α_{d+1} = β`), in the Pauli representation for `d ≤ 2` and the standard
//! Dirac representation for `d = 3`.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

const ANTICOMMUTATION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct DiracAlgebra {
    pub d: usize,
    /// Spinor dimension `N = 2^{⌊(d+1)/2⌋}`.
    pub n: usize,
    pub alphas: Vec<DMatrix<C64>>,
    pub beta: DMatrix<C64>,
}

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

fn pauli() -> [DMatrix<C64>; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        DMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        DMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

/// `[[a, b], [c, d]]` from 2×2 blocks.
fn blocks(a: &DMatrix<C64>, b: &DMatrix<C64>, cc: &DMatrix<C64>, d: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(cc);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

/// Largest entry modulus.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The fixed representation for `d ∈ {1, 2, 3}`.
pub fn build_algebra(d: usize) -> Result<DiracAlgebra> {
    let [s1, s2, s3] = pauli();
    let alg = match d {
        1 => DiracAlgebra {
            d,
            n: 2,
            alphas: vec![s1],
            beta: s3,
        },
        2 => DiracAlgebra {
            d,
            n: 2,
            alphas: vec![s1, s2],
            beta: s3,
        },
        3 => {
            let zero = DMatrix::zeros(2, 2);
            let id = DMatrix::identity(2, 2);
            let alphas = [s1, s2, s3].iter().map(|s| blocks(&zero, s, s, &zero)).collect();
            DiracAlgebra {
                d,
                n: 4,
                alphas,
                beta: blocks(&id, &zero, &zero, &(-id.clone())),
            }
        }
        _ => return Err(Error::Unsupported(format!("no Dirac representation for d = {d}"))),
    };
    alg.verify()?;
    Ok(alg)
}

impl DiracAlgebra {
    /// `α_1, …, α_d, β` in order.
    pub fn generators(&self) -> impl Iterator<Item = &DMatrix<C64>> {
        self.alphas.iter().chain(std::iter::once(&self.beta))
    }

    /// Largest entrywise deviation from `{A, B} = 2δ I` and from hermiticity.
    pub fn anticommutation_defect(&self) -> f64 {
        let gens: Vec<_> = self.generators().collect();
        let id = DMatrix::<C64>::identity(self.n, self.n);
        let mut worst: f64 = 0.0;
        for (j, a) in gens.iter().enumerate() {
            worst = worst.max(max_abs(&(*a - a.adjoint())));
            for (k, b) in gens.iter().enumerate() {
                let target = if j == k { &id * c(2.0, 0.0) } else { DMatrix::zeros(self.n, self.n) };
                let ac = *a * *b + *b * *a;
                worst = worst.max(max_abs(&(ac - target)));
            }
        }
        worst
    }

    pub fn verify(&self) -> Result<()> {
        let defect = self.anticommutation_defect();
        if defect > ANTICOMMUTATION_TOL {
            return Err(Error::domain(
                "DiracAlgebra",
                format!("anti-commutation defect {defect:.3e} exceeds {ANTICOMMUTATION_TOL:e}"),
            ));
        }
        Ok(())
    }

    /// The algebra `U A U*` for a unitary `U`.
    pub fn conjugated(&self, u: &DMatrix<C64>) -> DiracAlgebra {
        let ua = u.adjoint();
        DiracAlgebra {
            d: self.d,
            n: self.n,
            alphas: self.alphas.iter().map(|a| u * a * &ua).collect(),
            beta: u * &self.beta * &ua,
        }
    }

    /// Symbol `A_ξ = Σ ξ_j α_j + m β`, with `A_ξ² = (|ξ|² + m²) I`.
    pub fn symbol(&self, xi: &[f64], m: f64) -> DMatrix<C64> {
        let mut a = &self.beta * c(m, 0.0);
        for (x, alpha) in xi.iter().zip(&self.alphas) {
            a += alpha * c(*x, 0.0);
        }
        a
    }

    /// `e^{-itA_ξ} = cos(tφ) I - i sin(tφ)/φ A_ξ` with `φ = √(|ξ|² + m²)`.
    pub fn propagator(&self, t: f64, xi: &[f64], m: f64) -> DMatrix<C64> {
        let phi = (xi.iter().map(|x| x * x).sum::<f64>() + m * m).sqrt();
        let a = self.symbol(xi, m);
        let id = DMatrix::<C64>::identity(self.n, self.n);
        let sinc = if phi == 0.0 { t } else { (t * phi).sin() / phi };
        id * c((t * phi).cos(), 0.0) + a * c(0.0, -sinc)
    }
}

/// Haar-random `n × n` unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::<C64>::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { c(1.0, 0.0) } else { d / c(d.norm(), 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Random complex vector with standard Gaussian entries.
pub fn random_spinor<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<C64> {
    DVector::from_fn(n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn representations_anticommute() {
        for d in 1..=3 {
            let a = build_algebra(d).unwrap();
            assert_eq!(a.alphas.len(), d);
            assert_eq!(a.n, 1 << ((d + 1) / 2));
            assert!(a.anticommutation_defect() <= 1e-14);
        }
        assert!(build_algebra(4).is_err());
    }

    #[test]
    fn squares_are_identity_in_three_dimensions() {
        let a = build_algebra(3).unwrap();
        let id = DMatrix::<C64>::identity(4, 4);
        for g in a.generators() {
            assert!(max_abs(&(g * g - &id)) <= 1e-15);
        }
    }

    #[test]
    fn symbol_squares_to_phi() {
        let a = build_algebra(3).unwrap();
        let xi = [0.3, -1.2, 2.0];
        let m = 0.7;
        let s = a.symbol(&xi, m);
        let phi2 = xi.iter().map(|x| x * x).sum::<f64>() + m * m;
        let diff = &s * &s - DMatrix::<C64>::identity(4, 4) * c(phi2, 0.0);
        assert!(max_abs(&diff) < 1e-14);
    }

    #[test]
    fn conjugation_preserves_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=3 {
            let a = build_algebra(d).unwrap();
            let u = random_unitary(a.n, &mut rng);
            let b = a.conjugated(&u);
            assert!(b.anticommutation_defect() < 1e-13);
            let uu = &u * u.adjoint();
            assert!(max_abs(&(uu - DMatrix::<C64>::identity(a.n, a.n))) < 1e-14);
        }
    }
}
