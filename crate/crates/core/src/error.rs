use thiserror::Error;

use crate::walk::WalkOutcome;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("thresholds infeasible: sum exp(-c^2/16) = {sum} exceeds n/16 = {budget}")]
    Infeasible { sum: f64, budget: f64 },

    #[error("partial coloring failed after {attempts} attempts")]
    RetriesExhausted {
        attempts: usize,
        best: Box<WalkOutcome>,
    },

    #[error("round {round} failed with {unfixed} coordinates still unfixed: {source}")]
    RoundFailed {
        round: usize,
        unfixed: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("randomized rounding rejected {attempts} consecutive samples")]
    RoundingExhausted { attempts: usize },

    #[error("non-finite value in walk state at step {step}")]
    NumericFailure { step: u64 },

    #[error("brute force enumeration limited to n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Best walk outcome carried by a failure, if any.
    pub fn best_outcome(&self) -> Option<&WalkOutcome> {
        match self {
            Error::RetriesExhausted { best, .. } => Some(best),
            Error::RoundFailed { source, .. } => source.best_outcome(),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        match self {
            Error::NumericFailure { .. } => true,
            Error::RoundFailed { source, .. } => source.is_numeric(),
            _ => false,
        }
    }

    pub fn is_algorithmic(&self) -> bool {
        match self {
            Error::RetriesExhausted { .. } | Error::RoundingExhausted { .. } => true,
            Error::RoundFailed { source, .. } => source.is_algorithmic(),
            _ => false,
        }
    }
}
