use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input exceeds a configured size cap.
    #[error("capacity exceeded: {what} is {actual}, limit {limit}")]
    Capacity {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    /// A homomorphism search ran out of its node budget. Never evidence
    /// that no homomorphism exists.
    #[error("search budget of {budget} nodes exhausted")]
    Budget { budget: u64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A constructed object failed its own postcondition check.
    #[error("construction check failed: {0}")]
    Construction(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, actual: usize, limit: usize) -> Self {
        Error::Capacity {
            what,
            actual,
            limit,
        }
    }

    /// True for errors caused by running out of budget or size caps.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Capacity { .. } | Error::Budget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
