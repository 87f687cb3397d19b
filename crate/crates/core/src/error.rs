use thiserror::Error;

use crate::spectral::EigenResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {d}: {reason}")]
    InvalidDimension { d: i64, reason: &'static str },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension {d} exceeds the {limit} limit for {what}")]
    Size {
        d: usize,
        limit: usize,
        what: &'static str,
    },

    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("structure error: {0}")]
    Structure(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("eigensolver did not converge after {} iterations (residual {:.3e})", .best.iterations, .best.residual)]
    NotConverged { best: Box<EigenResult> },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
