use thiserror::Error;

/// Errors raised by constructors, verifiers and input handling.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value {value} exceeds the ground window [1..{n_max}]")]
    WindowOverflow { value: u64, n_max: u64 },

    #[error("oracle exhausted at {stage}: {reason}")]
    OracleExhausted { stage: String, reason: String },

    #[error("search bounds exceeded: {0}")]
    BoundsExceeded(String),

    #[error("row {row} of the matrix is zero")]
    ZeroRow { row: usize },

    #[error("prefix of length {t_len} leaves no index above {k} for subset {subset}")]
    PrefixTooShort { subset: String, k: usize, t_len: usize },

    #[error("constructed object failed its own verification: {0}")]
    VerificationFailed(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn exhausted(stage: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::OracleExhausted {
            stage: stage.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
