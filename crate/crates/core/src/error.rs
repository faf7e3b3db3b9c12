use serde_json::Value;
use thiserror::Error;

/// Every failure the library can report.
///
/// The variants fall into four classes that map onto the CLI exit codes:
/// usage problems, precision or resource limits, consistency failures
/// (a guaranteed identity did not hold) and lattice non-containment.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("p^N = {p}^{prec} overflows the 32-bit coordinate width")]
    Overflow { p: u32, prec: u32 },

    #[error("element is not a unit")]
    NonUnit,

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("lattice containment fails")]
    NotContained,

    #[error("candidate ceiling exceeded: estimated {estimate} candidates, ceiling {ceiling}")]
    Ceiling { estimate: f64, ceiling: u64 },

    #[error("i/o failure: {0}")]
    Io(String),

    #[error("consistency failure: {message}")]
    Consistency { message: String, counterexample: Value },
}

impl Error {
    pub fn consistency(message: impl Into<String>, counterexample: Value) -> Self {
        Error::Consistency { message: message.into(), counterexample }
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_) | Error::Overflow { .. } => 3,
            Error::Precision(_) | Error::Ceiling { .. } | Error::Io(_) => 2,
            Error::NonUnit | Error::NotContained | Error::Consistency { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
