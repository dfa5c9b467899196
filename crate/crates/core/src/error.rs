use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument broke an operation's contract (index out of range,
    /// mismatched lengths, allocation built for a different instance).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("expected {expected} utilities, found {found}")]
    WrongUtilityKind {
        expected: &'static str,
        found: &'static str,
    },

    /// Exhaustive enumeration refused because the input is too large.
    #[error("input too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A constructive procedure produced a result that failed its own check.
    #[error("postcondition violated: {0}")]
    Postcondition(String),
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
