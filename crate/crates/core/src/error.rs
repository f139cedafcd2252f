use thiserror::Error;

/// Errors raised by the toolkit.
///
/// `InvalidParameter` marks inputs that violate an operation's contract
/// (these map to exit code 2 in the CLI); everything else is a runtime
/// failure of a computation that was given valid inputs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no sign change bracketed: {0}")]
    NoSignChange(String),

    #[error("no negative region: {0}")]
    NoNegativeRegion(String),

    #[error("degree cap {cap} too small: {detail}")]
    InsufficientDegreeCap { cap: usize, detail: String },

    #[error("series breakdown: {0}")]
    SeriesBreakdown(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("closed form disagrees with cubic root by {max_abs:e} at x = {at}")]
    ClosedFormMismatch { max_abs: f64, at: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for contract violations by the caller.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParameter(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
