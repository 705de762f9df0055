use thiserror::Error;

use crate::metric::ValidationReport;

/// Errors produced by the library.
///
/// Variants fall into three groups that the CLI maps onto exit codes:
/// malformed input (`Shape`, `Domain`, `Json`), properties that do not hold
/// (`InvalidMetric`), and solver refusals (`SolverLimit`, `DepthTooSmall`,
/// `NotSelfSimilar`, `Unsupported`, `Evaluation`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not a valid metric ({} violation(s)); first: {}", .0.violations.len(), .0.violations.first().map(ToString::to_string).unwrap_or_default())]
    InvalidMetric(ValidationReport),

    #[error("exact solver limit exceeded: {size} points (limit {limit})")]
    SolverLimit { size: usize, limit: usize },

    #[error("depth bound too small: {needed} levels needed, max depth is {max_depth}")]
    DepthTooSmall { needed: usize, max_depth: usize },

    #[error("gauge is not self-similar at level {level}: h(r_l) = {coarse}, n * h(r_(l+1)) = {refined}")]
    NotSelfSimilar {
        level: usize,
        coarse: f64,
        refined: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("evaluation failed on cell {cell:?}: {message}")]
    Evaluation { cell: Vec<u32>, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
