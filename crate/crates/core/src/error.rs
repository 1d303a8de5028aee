use thiserror::Error;

/// Errors raised across the solver and certifier.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid structure constants: {0}")]
    InvalidStructure(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("metric scalar for block {block} must be nonzero")]
    ZeroScalar { block: String },

    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),

    #[error("Jacobi identity violated (residual {residual:e})")]
    JacobiViolation { residual: f64 },

    #[error("case {0} has no explicit matrix realization")]
    NotRealizable(String),

    #[error("unknown case: {0}")]
    UnknownCase(String),

    #[error("invalid case parameters: {0}")]
    InvalidParams(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("denominator vanishes at {0}")]
    ZeroDenominator(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("m must be positive, got {0}")]
    NonPositiveM(String),

    #[error("malformed rational: {0:?}")]
    MalformedRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
