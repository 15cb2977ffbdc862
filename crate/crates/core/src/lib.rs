//! Numerics for the Koopman operator of the geodesic flow on hyperbolic
//! quotients: SU(1,1) matrix coefficients, Ruelle resonances, resolvent
//! correlations, flat traces and the group Fourier transform.

pub mod circle_model;
pub mod error;
pub mod flat_trace;
pub mod group;
pub mod harmonic_transform;
pub mod matrix_elements;
pub mod oracle;
pub mod report;
pub mod resonances;
pub mod special_fn;

pub use error::{Error, Result};
pub use group::{EulerAngles, GroupElement, Sl2Element};
pub use matrix_elements::{Parity, RepIndex, Series, TruncationParams};
pub use num_complex::Complex64;
