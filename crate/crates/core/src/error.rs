//! Error type shared across the crate.

use thiserror::Error;

/// Convenience alias used by all fallible operations in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong outside of ordinary arithmetic.
///
/// Numerical soft failures (divergence past the overflow guard, step-size
/// underflow) are *not* errors: integrators report them through
/// [`crate::integrate::IntegrationOutcome`] so partial data stays usable.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor argument violated its documented range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: String,
    },

    /// An operation only defined for specific `(a, b)` cases got another one.
    #[error("unsupported case (a, b) = ({a}, {b}): {context}")]
    UnsupportedCase { a: u8, b: u8, context: &'static str },

    /// A 1-based mode index fell outside the stored range.
    #[error("mode index {n} out of range 1..={len}")]
    ModeIndexOutOfRange { n: usize, len: usize },

    /// Initial data failed the lower-bound hypothesis `A_n ≥ 2δ/n⁵`.
    #[error("initial coefficient A_{n} = {coeff:e} below required 2*delta/n^5 = {required:e}")]
    HypothesisViolation {
        n: usize,
        coeff: f64,
        required: f64,
    },

    /// A fit or probe needs more usable modes than the input provides.
    #[error("need at least {required} usable modes, found {available}")]
    InsufficientModes { available: usize, required: usize },

    /// A probe over a trajectory needs more snapshots than were recorded.
    #[error("need at least {required} snapshots, found {available}")]
    InsufficientSnapshots {
        available: usize,
        required: usize,
    },

    /// Picard sweeps on the variation-of-constants form stopped improving
    /// before reaching tolerance.
    #[error("picard iteration did not converge: last sweep changed solution by {diff:e}")]
    PicardNonConvergence { diff: f64 },

    /// Doubling the quadrature resolution moved the answer too much.
    #[error("quadrature did not converge: {detail}")]
    QuadratureNonConvergence { detail: String },

    /// An operation restricted to non-negative data saw a negative entry.
    #[error("negative entry w_{index} = {value:e} where non-negative data is required")]
    NegativeEntry { index: usize, value: f64 },

    /// A text document (config, CSV, JSON) failed to parse.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// A configuration file used a key this crate does not define.
    #[error("unknown configuration key `{key}`")]
    UnknownKey { key: String },
}

impl Error {
    /// Shorthand for [`Error::InvalidParameter`].
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Shorthand for [`Error::Parse`].
    pub fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            line,
            reason: reason.into(),
        }
    }
}
