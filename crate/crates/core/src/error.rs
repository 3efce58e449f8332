use thiserror::Error;

/// Errors raised by the solvers, oracles and file formats.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),
    /// An input exceeds the configured size budget of a backend.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// An operation was called in a state it does not support.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A text or JSON artifact could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// A self-check failed; this indicates a bug in a solver.
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
