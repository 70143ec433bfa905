use std::path::PathBuf;

/// Errors raised anywhere in the aggregation stack.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A density was evaluated off its open support.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    /// The Markov chain hit a state it cannot continue from.
    #[error("chain aborted at iteration {iteration}: {reason}")]
    ChainAbort { iteration: usize, reason: String },

    #[error("too few posterior draws: need at least {needed}, have {have}")]
    InsufficientDraws { needed: usize, have: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag, used by the CLI error line and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Domain(_) => "domain",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NonFinite(_) => "non_finite",
            Error::NumericFailure(_) => "numeric_failure",
            Error::ChainAbort { .. } => "chain_abort",
            Error::InsufficientDraws { .. } => "insufficient_draws",
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
