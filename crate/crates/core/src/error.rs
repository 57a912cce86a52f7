//! Error type shared by every module of the crate.

use crate::opalg::ConePoint;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes surfaced by the library.
///
/// Variants map onto CLI exit codes as follows: `Convergence` exits with
/// code 2, every other variant exits with code 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two operands (or an operand and an expected shape) disagree in size.
    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },

    /// An operator that must be invertible is singular, or a pair has
    /// scalar coordinate zero where the scalar calculus needs its inverse.
    #[error("singular operator: {0}")]
    Singular(String),

    /// Input lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input is degenerate for the requested operation, for example a
    /// linearly dependent basis or a zero-area plane section.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An iteration failed to reach its tolerance. Carries the residual at
    /// the best iterate, and the iterate itself when one is available.
    #[error("no convergence in {context} after {iterations} iterations (residual {residual:.3e})")]
    Convergence {
        context: String,
        iterations: usize,
        residual: f64,
        best: Option<Box<ConePoint>>,
    },

    /// Index outside the valid range of a sampled curve or basis.
    #[error("index out of range: {0}")]
    Index(String),

    /// Malformed request (bad JSON, missing flag, unknown suite name).
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    /// Exit code the CLI reports for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Convergence { .. } => 2,
            _ => 1,
        }
    }
}
