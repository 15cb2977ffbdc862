//! Brute-force numerics used as independent checks: certified periodic
//! quadrature, Gauss–Legendre, small dense linear algebra, exponential fits,
//! extrapolation and polynomial roots.

pub mod fit;
pub mod linalg;
pub mod quadrature;

pub use fit::{expsum_fit, neville_at_zero, poly_roots, richardson_derivative};
pub use linalg::{lstsq, null_space, null_vector, subspace_angle, svd_small, vector_angle, CMatrix, Svd};
pub use quadrature::{
    gauss_legendre, integrate_gl, integrate_gl_panels, laplace_quad, quad_periodic,
    quad_periodic_adaptive, AccuracyCertificate,
};
