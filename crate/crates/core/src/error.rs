use thiserror::Error;

/// Failures raised by estimation, resampling and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series needs at least {min} observations, got {got}")]
    TooShort { min: usize, got: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("lag {lag} out of range for a series of length {n}")]
    LagOutOfRange { lag: usize, n: usize },

    #[error("no testable lags: the maximum lag must be at least 1")]
    NoLags,

    #[error("degenerate series: zero sample variance")]
    DegenerateSeries,

    #[error("rank deficient design (condition number {0:.3e})")]
    RankDeficient(f64),

    #[error("optimizer failed to converge within {0} iterations")]
    NonConvergence(usize),

    #[error("block length {block} invalid for n = {n} (need 1 <= b < n)")]
    InvalidBlockSize { block: usize, n: usize },

    #[error("{failed} of {total} resampling re-fits failed")]
    TooManyFailures { failed: usize, total: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    /// True for failures that come from the numerics rather than from bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSeries
                | Error::RankDeficient(_)
                | Error::NonConvergence(_)
                | Error::TooManyFailures { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
