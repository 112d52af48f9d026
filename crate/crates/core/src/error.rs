//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by basis construction, solvers, and closed-form evaluators.
#[derive(Debug, Error)]
pub enum Error {
    /// A quantity fell outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration or allocation would exceed a configured cap.
    #[error("sizing error: {0}")]
    Sizing(String),

    /// A caller-side contract was violated (mismatched lengths, bad counts).
    #[error("contract error: {0}")]
    Contract(String),

    /// The iterative eigensolver failed to reach the requested residual.
    #[error("solver did not converge: residual {residual:.3e} after {matvecs} matvecs (target {target:.3e})")]
    SolverNotConverged {
        residual: f64,
        matvecs: usize,
        target: f64,
    },

    /// A matrix was singular to working tolerance.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// A least-squares design matrix was rank deficient or underdetermined.
    #[error("fit error: {0}")]
    Fit(String),

    /// A computed state violated a physical invariant it was required to satisfy.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
