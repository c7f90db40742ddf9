use alloc::string::String;

/// Errors raised by form computations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension must be at least 1")]
    EmptyForm,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("form has non-integral entries")]
    NotIntegral,
    #[error("integral form is not primitive (content {0})")]
    NotPrimitive(String),
    #[error("form is not perfect (rank {rank} < {expected})")]
    NotPerfect { rank: usize, expected: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    CapExceeded { dim: usize, cap: usize },
    #[error("invalid facet: {0}")]
    InvalidFacet(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
}

pub type Result<T> = core::result::Result<T, Error>;
