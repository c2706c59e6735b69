use thiserror::Error;

/// Errors raised by the matrix kernel and everything built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvError {
    /// Operand shapes do not fit the operation.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A matrix lacks the structure an operation requires (e.g. skew-symmetry).
    #[error("structure violation: {0}")]
    Structure(String),

    /// NaN or infinite entries were supplied.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// Invalid combination of arguments (manifold/metric mismatch, dimensions
    /// for which sectional curvature is undefined, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// The two spanning vectors are (numerically) parallel.
    #[error("degenerate section: {0}")]
    DegenerateSection(String),

    /// A curvature formula was handed a pair that is not orthonormal in its metric.
    #[error("normalization error: {0}")]
    Normalization(String),

    /// A scalar argument lies outside the domain of a bound function.
    #[error("domain error: {0}")]
    Domain(String),
}

impl CurvError {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        CurvError::Dimension(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        CurvError::Usage(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, CurvError>;
