use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("argument out of admissible range: {0}")]
    Range(String),
    #[error("enumeration guard exceeded: {0}")]
    Resource(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shooting bracket not found: {0}")]
    NoBracket(String),
    #[error("no convergence after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("support measure {measure} exceeds rearrangement threshold {threshold}")]
    SupportTooLarge { measure: f64, threshold: f64 },
    #[error("unsupported grid size: {0}")]
    Size(String),
    #[error("grid too coarse: {0}")]
    Resolution(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
