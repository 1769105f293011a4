//! Error type shared across the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by library operations.
///
/// The CLI maps these onto exit codes: parse and argument problems exit 2,
/// mathematical contradictions exit 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition was violated or an argument is out of range.
    InvalidArgument(String),
    /// A configured size cap (pair count, binomial magnitude, ground size)
    /// would be exceeded.
    ResourceLimit(String),
    /// Input text failed to parse; the message carries position info.
    Parse(String),
    /// A proven inequality failed on a verified input. This must never fire
    /// on a correct build; `dump` carries a serialized counterexample so the
    /// evidence is preserved.
    Contradiction {
        summary: String,
        /// JSON serialization of the offending system, when available.
        dump: Option<String>,
    },
}

impl Error {
    /// Shorthand for [`Error::InvalidArgument`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Shorthand for [`Error::ResourceLimit`].
    pub fn limit(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }

    /// Shorthand for [`Error::Contradiction`].
    pub fn contradiction(summary: impl Into<String>, dump: Option<String>) -> Self {
        Error::Contradiction {
            summary: summary.into(),
            dump,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::ResourceLimit(msg) => write!(f, "resource limit: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Contradiction { summary, .. } => {
                write!(f, "mathematical contradiction: {summary}")
            }
        }
    }
}

impl std::error::Error for Error {}
