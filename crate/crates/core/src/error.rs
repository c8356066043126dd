use thiserror::Error;

/// Errors raised by the library. Each variant names the violated precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violated a mathematical precondition (zero divisor, non-prime, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A literal could not be parsed.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// A computation would exceed a configured resource cap.
    #[error("resource cap exceeded: {what} (cap {cap})")]
    Resource { what: String, cap: u128 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    pub(crate) fn resource(what: impl Into<String>, cap: impl Into<u128>) -> Self {
        Error::Resource {
            what: what.into(),
            cap: cap.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
