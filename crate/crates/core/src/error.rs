use thiserror::Error;

/// Errors raised by norm evaluation, basis machinery, the optimizer and the
/// fixed-point harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector has a non-finite entry at index {index}")]
    InvalidVector { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unit ball of {0} is not polyhedral")]
    NotPolyhedral(String),

    #[error("dimension {dim} exceeds enumeration cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("vector is not in the span of the basic sequence (residual {residual:e})")]
    NotInSpan { residual: f64 },

    #[error("index {index} out of range 1..={len}")]
    IndexError { index: usize, len: usize },

    #[error("point is not in the simplex: {0}")]
    NotInSimplex(String),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("simplex iteration cap {0} hit; cycling suspected")]
    CycleSuspected(usize),

    #[error("empty input")]
    EmptyInput,

    #[error("invalid scaling: {0}")]
    InvalidScaling(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid alpha schedule: {0}")]
    InvalidSchedule(String),

    #[error("index sequences are identical")]
    IdenticalSequences,

    #[error("support {support} exceeds truncation {truncation}")]
    TruncationOverflow { support: usize, truncation: usize },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
