use thiserror::Error;

/// Errors produced by the spline, propagation and Floquet routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid is not uniform: spacing {found} differs from {expected} at piece {piece}")]
    NonUniformGrid {
        piece: usize,
        expected: f64,
        found: f64,
    },

    #[error("x = {x} lies outside [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("E = {energy} is not an eigenvalue for this exponent (residual {residual:e})")]
    NoEigenfunction { energy: f64, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
