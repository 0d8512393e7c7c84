use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("{0}")]
    Domain(String),

    /// Two permutations or vectors disagree on their degree.
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    /// A search or expansion hit its configured cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Two independent computations that must agree did not.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}
