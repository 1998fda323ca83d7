use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed caller input: bad lengths, out-of-range intervals, unknown ids.
    Input(String),
    /// A documented precondition of an operation does not hold.
    Contract(String),
    /// An invariant that the algorithms guarantee was observed broken.
    Internal(String),
    /// Threshold-pair search ran out of islands. Only reachable when the
    /// valuations do not satisfy the normalized input conditions.
    NoThresholdPair,
    /// A brute-force search would exceed its state budget.
    SearchBudget { states: u64, budget: u64 },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::Contract(msg) => write!(f, "precondition violated: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
            Error::NoThresholdPair => write!(f, "no threshold pair exists for the given valuations"),
            Error::SearchBudget { states, budget } => {
                write!(f, "search space of {states} states exceeds budget {budget}")
            }
        }
    }
}

impl core::error::Error for Error {}
