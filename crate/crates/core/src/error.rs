use thiserror::Error;

/// Errors produced while building sector bases, density matrices and reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} needs dimension {dim}, above the cap of {cap} rows{hint}")]
    ResourceLimit {
        what: String,
        dim: u64,
        cap: u64,
        hint: &'static str,
    },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("{what} failed to converge (residual {residual:e})")]
    NumericalFailure { what: &'static str, residual: f64 },

    #[error("not a probability distribution: entries sum to {sum}")]
    InvalidDistribution { sum: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    PsdViolation { eigenvalue: f64 },
}

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Argument,
    Resource,
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_) => ErrorKind::Argument,
            Error::ResourceLimit { .. } | Error::Overflow(_) => ErrorKind::Resource,
            Error::NumericalFailure { .. }
            | Error::InvalidDistribution { .. }
            | Error::PsdViolation { .. } => ErrorKind::Numerical,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
