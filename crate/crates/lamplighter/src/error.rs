//! Error type shared by every module.

use thiserror::Error;

/// All failure modes of the library.
///
/// The CLI maps these onto its exit-code contract: input-shaped failures
/// (parsing, malformed matrices, bad parameters) become exit code 2, domain
/// failures (failed certificates, missing witnesses, size bounds) become
/// exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix not invertible: {0}")]
    NotInvertible(String),

    #[error("multiplicative order not found: {0}")]
    OrderNotFound(String),

    #[error("affine orbit does not close: {0}")]
    OrbitOpen(String),

    #[error("size bound exceeded: {0}")]
    SizeBound(String),

    #[error("no witness available: {0}")]
    NoWitness(String),

    #[error("certificate check failed: {0}")]
    CertificateFailed(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by malformed input rather than by the
    /// mathematics of a well-formed request.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Dimension(_)
                | Error::Parameter(_)
                | Error::Shape(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
