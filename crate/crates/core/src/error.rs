use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates a documented bound.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested operation is not defined for this boundary flavour.
    #[error("unsupported boundary: {0}")]
    UnsupportedBoundary(String),
    /// Operator assembled on a basis with the wrong per-site cap.
    #[error("cap mismatch: {0}")]
    CapMismatch(String),
    /// The computation would exceed a configured size budget.
    #[error("resource limit: {0}")]
    Resource(String),
    /// An iterative numeric routine failed to reach its tolerance.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Two independent evaluations of the same quantity disagree.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
