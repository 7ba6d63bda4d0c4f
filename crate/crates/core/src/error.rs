//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by the arithmetic, special-function, geometry and
/// Weyl-sum layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An arithmetic function was called with n = 0 where n >= 1 is required.
    #[error("argument must be a positive integer, got 0")]
    ZeroModulus,

    /// Evaluation at a pole or outside a function's supported region.
    #[error("{func}: {detail}")]
    Domain {
        /// Name of the rejecting operation.
        func: &'static str,
        /// What was wrong with the input.
        detail: String,
    },

    /// Fundamental-domain reduction exceeded its iteration guard,
    /// signalling numerical breakdown.
    #[error("fundamental-domain reduction did not converge after {iterations} iterations")]
    ReductionOverflow {
        /// Number of iterations performed before giving up.
        iterations: u64,
    },

    /// A Fourier/q-expansion needs more coefficients than are loaded.
    #[error("expansion needs {needed} coefficients but only {available} are loaded")]
    InsufficientCoefficients {
        /// Truncation length required at the evaluation point.
        needed: usize,
        /// Length of the stored coefficient list.
        available: usize,
    },

    /// Malformed form-data input.
    #[error("parse error at line {line}: {msg}")]
    Parse {
        /// 1-based line number in the input stream.
        line: usize,
        /// Description of the malformation.
        msg: String,
    },

    /// Form data violated a load-time invariant (normalization, Hecke
    /// relation, coefficient bound). Names the failed bound and index.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A least-squares fit was requested with fewer than 3 usable samples.
    #[error("decay fit needs at least 3 nonzero samples, got {usable}")]
    TooFewPoints {
        /// Number of samples that survived the zero-drop rule.
        usable: usize,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}
