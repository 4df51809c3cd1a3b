use num_complex::Complex64;
use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input that violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The operation needs a polynomial of degree at least one.
    #[error("polynomial is constant (degree {0})")]
    Degenerate(usize),

    /// Simultaneous root iteration did not reach the residual tolerance.
    #[error("root finder did not converge (max scaled residual {residual:e})")]
    RootsNotConverged { best: Vec<Complex64>, residual: f64 },

    /// A Newton-type iteration failed to converge.
    #[error("{context}: no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        context: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// The point lies on (or numerically on) the set `E` or the lemniscate `L`.
    #[error("point {0} lies on the set (or within tolerance of it)")]
    OnSet(Complex64),

    /// Structural inconsistency, e.g. wrong number of outer critical points.
    #[error("inconsistent structure: {0}")]
    Inconsistent(String),

    /// A closed-form method was requested whose preconditions do not hold.
    #[error("closed form not applicable: {0}")]
    NotApplicable(String),
}

impl Error {
    /// True for failures of an iterative numerical method, as opposed to bad
    /// input or violated preconditions.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::RootsNotConverged { .. } | Error::NoConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
