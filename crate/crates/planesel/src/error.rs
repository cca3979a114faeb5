//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by simulation and analysis operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input violated a mathematical domain constraint (negative width,
    /// zero survival probability, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A run configuration is inconsistent (step size too coarse, non-uniform
    /// grid where a uniform one is required, unknown config key, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical invariant was violated during computation (norm drift,
    /// non-convergence of an eigensolver, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A width extraction was ambiguous; both candidate widths are carried.
    #[error("ambiguous width: candidates {left:?} and {right:?} Hz")]
    AmbiguousWidth { left: f64, right: f64 },

    /// Degenerate input that makes an estimator undefined (vanishing
    /// denominator, too few distinct points, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A fit failed to converge; the message carries the residual report.
    #[error("fit failure: {0}")]
    FitFailure(String),

    /// I/O failure while reading or writing artifacts.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
