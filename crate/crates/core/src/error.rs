//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

use crate::bestapprox::BestApproxSequence;

#[derive(Debug, Error)]
pub enum Error {
    /// A fractional-distance request could not decide the nearest integer:
    /// the input interval straddles a half-integer. Raise precision and retry.
    #[error("ambiguous rounding: interval straddles a half-integer, raise precision")]
    AmbiguousRounding,

    /// A certified comparison could not be decided because the two intervals
    /// overlap. Raise precision and retry.
    #[error("indeterminate comparison: intervals overlap, raise precision")]
    Indeterminate,

    /// A decision stayed indeterminate after the bounded number of
    /// precision-doubling retries.
    #[error("comparison still indeterminate after {retries} precision-doubling retries")]
    PrecisionExhausted { retries: u32 },

    /// A form evaluated to a certified zero on a nonzero integer vector,
    /// i.e. the system carries an integer relation.
    #[error("degenerate form: M(y) = 0 certified at y = {y:?}")]
    DegenerateForm { y: Vec<i64> },

    /// The per-build evaluation budget ran out. Carries the partial sequence
    /// when a best-approximation build was interrupted.
    #[error("evaluation budget exceeded after {spent} form evaluations")]
    BudgetExceeded {
        spent: u64,
        partial: Option<Box<BestApproxSequence>>,
    },

    /// A continued-fraction expansion cannot reach the requested radius with
    /// the quotients available.
    #[error("continued fraction has too few quotients for the requested radius (have {available})")]
    InsufficientQuotients { available: usize },

    /// A tail bound fell outside what the configured precision can represent.
    #[error("precision overflow: {0}")]
    PrecisionOverflow(String),

    /// An estimator was fed fewer records than its minimum.
    #[error("insufficient data: need at least {needed} records, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// Subsequence extraction kept too few indices.
    #[error("subsequence too short: only {kept} indices qualify")]
    TooShort { kept: usize },

    /// Nested-box refinement found no sub-box certifying the separation bound.
    #[error("no qualifying sub-box at chain index {index} (depth searched: {max_depth})")]
    NoQualifyingBox { index: usize, max_depth: u32 },

    /// An enumeration that is guaranteed non-empty found nothing. This
    /// indicates an arithmetic fault and is always a hard error.
    #[error("search exhausted: no solution with |x| <= {x_bound} although one must exist")]
    SearchExhausted { x_bound: u64 },

    #[error("invalid manifest: {0}")]
    InvalidManifest(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidManifest(_) => 4,
            Error::AmbiguousRounding
            | Error::Indeterminate
            | Error::PrecisionExhausted { .. }
            | Error::BudgetExceeded { .. }
            | Error::PrecisionOverflow(_) => 3,
            _ => 3,
        }
    }
}
