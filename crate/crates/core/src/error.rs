use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("matrix is not a valid kernel: {0}")]
    InvalidKernel(String),

    #[error("kernel is not negative semi-definite: min centered eigenvalue {min_eigenvalue} below -{tolerance}")]
    NotNegativeSemidefinite { min_eigenvalue: f64, tolerance: f64 },

    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),

    #[error("not a group: {0}")]
    GroupClosure(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
