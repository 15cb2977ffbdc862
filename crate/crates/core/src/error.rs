use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("gamma pole at z = {0}")]
    Pole(Complex64),

    #[error("accuracy certificate failed in {what}: coarse = {coarse}, fine = {fine}, estimate = {estimate:e}")]
    Accuracy {
        what: &'static str,
        coarse: Complex64,
        fine: Complex64,
        estimate: f64,
    },

    #[error("no eigenfunctional: smallest singular value ratio {ratio:e}")]
    NoEigenfunctional { ratio: f64 },

    #[error("z = {z} is within {distance:e} of the resonance {pole}")]
    PoleProximity {
        z: Complex64,
        pole: Complex64,
        distance: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("input error at line {line}: {msg}")]
    Input { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
