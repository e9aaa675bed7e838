//! Special functions: Legendre polynomials in `d` dimensions, Gamma
//! ratios, Gauss–Jacobi rules, adaptive quadrature and sphere geometry.

pub mod adaptive;
pub mod gamma;
pub mod legendre;
pub mod quadrature;
pub mod sphere;

pub use adaptive::{gk15, integrate_adaptive, integrate_adaptive_breaks, tanh_sinh, Integral};
pub use gamma::{gamma_ratio, log_gamma, log_gamma_ratio};
pub use legendre::{legendre_d, legendre_d_all, LegendreEval};
pub use quadrature::{cached_rule, gauss_jacobi, gauss_jacobi_ab, gauss_legendre, NodeMethod, QuadratureRule};
pub use sphere::{harmonic_dim, sphere_area};
