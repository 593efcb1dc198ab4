use thiserror::Error;

/// Errors shared across the crate.
///
/// The audit variants (`Audit`, `Contract`) are first-class outputs: they flag
/// a disagreement between a prose-level construction and what machine checking
/// finds, rather than a programming bug.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("size budget exceeded: {what} needs more than {budget}")]
    Budget { what: String, budget: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("audit failure: {0}")]
    Audit(String),

    #[error("search budget exhausted after {explored} states")]
    SearchBudget { explored: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn audit(msg: impl Into<String>) -> Self {
        Error::Audit(msg.into())
    }
}
