use thiserror::Error;

/// Errors raised by constructors and evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {n} out of range 1..={max}")]
    DimensionOutOfRange { n: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("chart point outside the admissible region: {0}")]
    OutsideChart(String),
    #[error("point outside the domain: {0}")]
    OutsideDomain(String),
    #[error("metric is singular or not positive definite at the query point")]
    SingularMetric,
    #[error("finite-difference step {0} outside (1e-8, 1e-1)")]
    InvalidStep(f64),
    #[error("grid is empty or has an axis with fewer than 2 points")]
    EmptyGrid,
    #[error("differential is rank deficient at the query point")]
    RankDeficient,
    #[error("normal direction is ambiguous at the query point")]
    AmbiguousNormal,
    #[error("operation needs {0}")]
    Unsupported(&'static str),
    #[error("constraint `{name}` violated (residual {residual:.3e})")]
    Constraint { name: String, residual: f64 },
    #[error("spinor field is not periodic (mismatch {0:.3e})")]
    NotPeriodic(f64),
    #[error("missing data: {0}")]
    Missing(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn constraint(name: impl Into<String>, residual: f64) -> Error {
    Error::Constraint {
        name: name.into(),
        residual,
    }
}
