use thiserror::Error;

/// Errors produced by the exact difference-calculus routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("difference of the sample table leaves an empty box")]
    EmptyBox,

    #[error("sample window too small: {0}")]
    WindowTooSmall(String),

    #[error("operators {0} and {1} do not commute")]
    NonCommuting(usize, usize),

    #[error("operator {0} violates the containment L^m(V) in V")]
    ContainmentViolated(usize),

    #[error("matrix does not have the required shape: {0}")]
    Shape(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
