//! The 4×4 form `Q(r)` of the one-dimensional Dirac smoothing norm.
//!
//! ```text
//! Q(r) = [[a I₂, (b/2) I₂], [(b/2) I₂, c I₂]]
//!      = ½(λ₀+λ₁) I₄ + (m / 2φ²)(λ₀-λ₁) [[m I₂, r I₂], [r I₂, -m I₂]]
//! ```
//!
//! The block matrix squares to `φ² I₄`, so the spectrum of `Q` is
//! `½(λ₀+λ₁) ± (m / 2φ)|λ₀-λ₁|`, each with multiplicity two.

use nalgebra::{Complex, DMatrix, DVector, Matrix4, Vector4};

use super::algebra::C64;
use crate::error::{Error, Result};
use crate::funk_hecke::{lambda_k_1d, SmoothingProblem};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadForm1D {
    pub r: f64,
    pub m: f64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Maximal eigenvalue of `Q(r)` with an orthonormal basis of its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub basis: Vec<DVector<C64>>,
}

impl QuadForm1D {
    pub fn from_lambdas(r: f64, m: f64, lambda0: f64, lambda1: f64) -> Self {
        let phi2 = r * r + m * m;
        let mean = 0.5 * (lambda0 + lambda1);
        let coupling = m / (2.0 * phi2) * (lambda0 - lambda1);
        Self {
            r,
            m,
            lambda0,
            lambda1,
            a: mean + coupling * m,
            b: 2.0 * coupling * r,
            c: mean - coupling * m,
        }
    }

    /// `Q(r)` for a one-dimensional problem with relativistic `φ`.
    pub fn new(problem: &SmoothingProblem, r: f64) -> Result<Self> {
        let m = dirac_mass(problem)?;
        if problem.d != 1 {
            return Err(Error::domain("QuadForm1D", format!("problem has d = {}", problem.d)));
        }
        Ok(Self::from_lambdas(r, m, lambda_k_1d(problem, 0, r)?, lambda_k_1d(problem, 1, r)?))
    }

    pub fn phi(&self) -> f64 {
        self.r.hypot(self.m)
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        let (a, h, c) = (self.a, 0.5 * self.b, self.c);
        Matrix4::new(
            a, 0.0, h, 0.0, //
            0.0, a, 0.0, h, //
            h, 0.0, c, 0.0, //
            0.0, h, 0.0, c,
        )
    }

    /// `Q` as a complex Hermitian matrix.
    pub fn matrix_complex(&self) -> DMatrix<C64> {
        let m = self.matrix();
        DMatrix::from_fn(4, 4, |i, j| Complex::new(m[(i, j)], 0.0))
    }

    /// The reconstruction `½(λ₀+λ₁) I + (m/2φ²)(λ₀-λ₁) B`.
    pub fn reconstruct(&self) -> Matrix4<f64> {
        let (m, r) = (self.m, self.r);
        let block = Matrix4::new(
            m, 0.0, r, 0.0, //
            0.0, m, 0.0, r, //
            r, 0.0, -m, 0.0, //
            0.0, r, 0.0, -m,
        );
        Matrix4::identity() * (0.5 * (self.lambda0 + self.lambda1))
            + block * (m / (2.0 * self.phi().powi(2)) * (self.lambda0 - self.lambda1))
    }

    /// Half the gap between the two eigenvalues, `(m / 2φ)|λ₀-λ₁|`.
    pub fn half_gap(&self) -> f64 {
        let phi = self.phi();
        if phi == 0.0 {
            return 0.0;
        }
        self.m / (2.0 * phi) * (self.lambda0 - self.lambda1).abs()
    }

    /// Whether `m F_w(2r²)` vanishes at working precision, in which case
    /// `Q` is a multiple of the identity.
    pub fn is_degenerate(&self) -> bool {
        let scale = 0.5 * (self.lambda0.abs() + self.lambda1.abs());
        self.half_gap() <= 1e-14 * scale.max(f64::MIN_POSITIVE)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        0.5 * (self.lambda0 + self.lambda1) + self.half_gap()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        0.5 * (self.lambda0 + self.lambda1) - self.half_gap()
    }

    /// Closed-form basis of the top eigenspace `W(r)`: all of `C⁴` when
    /// `m F_w(2r²) = 0`, otherwise the span of `(m ± φ, 0, r, 0)` and
    /// `(0, m ± φ, 0, r)` with the sign of `m F_w(2r²)`.
    pub fn top_eigenspace(&self) -> Vec<Vector4<f64>> {
        if self.is_degenerate() {
            return (0..4).map(|i| Vector4::ith(i, 1.0)).collect();
        }
        self.branch_basis((self.lambda0 - self.lambda1).signum())
    }

    /// Basis of the bottom eigenspace (empty complement when degenerate).
    pub fn bottom_eigenspace(&self) -> Vec<Vector4<f64>> {
        if self.is_degenerate() {
            return Vec::new();
        }
        self.branch_basis(-(self.lambda0 - self.lambda1).signum())
    }

    fn branch_basis(&self, sign: f64) -> Vec<Vector4<f64>> {
        let phi = self.phi();
        // m - φ = -r²/(m + φ) avoids cancellation on the minus branch
        let top = if sign > 0.0 { self.m + phi } else { -self.r * self.r / (self.m + phi) };
        let v1 = Vector4::new(top, 0.0, self.r, 0.0).normalize();
        let v2 = Vector4::new(0.0, top, 0.0, self.r).normalize();
        vec![v1, v2]
    }
}

fn to_complex(v: &Vector4<f64>) -> DVector<C64> {
    DVector::from_iterator(4, v.iter().map(|&x| Complex::new(x, 0.0)))
}

/// Closed-form maximal eigenpair of `Q(r)`.
pub fn max_eigenpair(q: &QuadForm1D) -> Result<EigenPair> {
    let value = q.max_eigenvalue();
    if !value.is_finite() {
        return Err(Error::Eigen(format!("non-finite entries in Q({})", q.r)));
    }
    Ok(EigenPair {
        value,
        basis: q.top_eigenspace().iter().map(to_complex).collect(),
    })
}

/// Generic Hermitian eigensolver result used to cross-check [`max_eigenpair`]:
/// `(largest eigenvalue, its multiplicity within tol, eigenvectors)`.
pub fn max_eigenpair_generic(q: &QuadForm1D) -> Result<(f64, Vec<DVector<C64>>)> {
    let h = q.matrix_complex();
    let eig = nalgebra::SymmetricEigen::try_new(h, f64::EPSILON, 200)
        .ok_or_else(|| Error::Eigen(format!("Hermitian solver did not converge at r = {}", q.r)))?;
    let top = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = eig.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let vecs = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &v)| top - v <= 1e-12 * scale.max(f64::MIN_POSITIVE))
        .map(|(i, _)| eig.eigenvectors.column(i).into_owned())
        .collect();
    Ok((top, vecs))
}

/// Norm of the component of `v` orthogonal to the span of `basis` (orthonormal).
pub fn projection_residual(v: &DVector<C64>, basis: &[DVector<C64>]) -> f64 {
    let mut rest = v.clone();
    for b in basis {
        let coeff = b.dotc(v);
        rest -= b * coeff;
    }
    rest.norm()
}

pub(crate) fn dirac_mass(problem: &SmoothingProblem) -> Result<f64> {
    problem.phi.mass().ok_or_else(|| {
        Error::domain(
            "dirac",
            format!("Dirac quantities need a relativistic dispersion, got {}", problem.phi),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reconstruction_and_trace() {
        let q = QuadForm1D::from_lambdas(0.8, 1.3, 2.0, 0.5);
        assert!((q.matrix() - q.reconstruct()).abs().max() <= 1e-14);
        assert_relative_eq!(q.matrix().trace(), 2.0 * (2.0 + 0.5), max_relative = 1e-15);
    }

    #[test]
    fn block_matrix_eigenvalues() {
        // [[m I, r I], [r I, -m I]] has eigenvalues ±√(m² + r²)
        let q = QuadForm1D::from_lambdas(3.0, 4.0, 1.0 + 25.0, 1.0 - 25.0);
        // here the form is I + 4B
        let scale = q.m / (2.0 * q.phi().powi(2)) * (q.lambda0 - q.lambda1);
        assert_relative_eq!(scale, 25.0 * 4.0 / 25.0, max_relative = 1e-15);
        assert_relative_eq!(q.max_eigenvalue(), 1.0 + scale * 5.0, max_relative = 1e-14);
        assert_relative_eq!(q.min_eigenvalue(), 1.0 - scale * 5.0, max_relative = 1e-14);
    }

    #[test]
    fn degenerate_when_massless() {
        let q = QuadForm1D::from_lambdas(1.0, 0.0, 3.0, 1.0);
        let pair = max_eigenpair(&q).unwrap();
        assert_eq!(pair.basis.len(), 4);
        assert_relative_eq!(pair.value, 2.0);
    }

    #[test]
    fn plus_branch_example() {
        let q = QuadForm1D::from_lambdas(1.0, 1.0, 2.0, 1.0);
        let pair = max_eigenpair(&q).unwrap();
        assert_eq!(pair.basis.len(), 2);
        let v = Vector4::new(1.0 + 2f64.sqrt(), 0.0, 1.0, 0.0);
        let residual = projection_residual(&to_complex(&v.normalize()), &pair.basis);
        assert!(residual < 1e-14);
    }

    #[test]
    fn generic_solver_agrees() {
        for &(r, m, l0, l1) in &[(0.5, 1.0, 3.0, 1.0), (2.0, 0.3, 1.0, 4.0), (1.0, 0.0, 2.0, 2.0)] {
            let q = QuadForm1D::from_lambdas(r, m, l0, l1);
            let (top, vecs) = max_eigenpair_generic(&q).unwrap();
            let pair = max_eigenpair(&q).unwrap();
            assert_relative_eq!(top, pair.value, max_relative = 1e-13);
            assert_eq!(vecs.len(), pair.basis.len());
            for v in &vecs {
                assert!(projection_residual(v, &pair.basis) < 1e-12);
            }
        }
    }
}
