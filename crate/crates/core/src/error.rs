//! Error types shared by the whole crate.

use thiserror::Error;

/// Errors produced by operator construction, evaluation and reporting.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or option value violated its invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An evaluation-point argument lies outside the operator domain.
    #[error("argument out of domain: {0}")]
    Domain(String),

    /// A Beta-kernel moment of this order does not exist for the given n*rho.
    #[error("moment of order {order} requires n*rho > {order}, but n*rho = {n_rho}")]
    MomentExistence { order: u32, n_rho: f64 },

    /// The weight series did not reach the requested tail bound within the cap.
    #[error(
        "series cap of {k_max} terms exceeded (partial sum {partial_sum:e}, tail bound {tail_bound:e})"
    )]
    SeriesCapExceeded {
        k_max: usize,
        partial_sum: f64,
        tail_bound: f64,
    },

    /// Adaptive quadrature stalled above the requested tolerance.
    #[error(
        "quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}, requested {requested:e}"
    )]
    QuadratureNonconvergence {
        estimate: f64,
        error_bound: f64,
        requested: f64,
    },

    /// Wraps an evaluation failure with the grid point that triggered it.
    #[error("evaluation failed at x = {x}: {source}")]
    EvalAt { x: f64, source: Box<Error> },

    /// Wraps an evaluation failure with the rho value that triggered it.
    #[error("evaluation failed at rho = {rho}: {source}")]
    EvalAtRho { rho: f64, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Tag an error with the grid point it occurred at.
    pub fn at_x(self, x: f64) -> Error {
        Error::EvalAt {
            x,
            source: Box::new(self),
        }
    }

    /// Tag an error with the rho value it occurred at.
    pub fn at_rho(self, rho: f64) -> Error {
        Error::EvalAtRho {
            rho,
            source: Box::new(self),
        }
    }

    /// The innermost error, unwrapping grid-point and rho tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::EvalAt { source, .. } | Error::EvalAtRho { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
