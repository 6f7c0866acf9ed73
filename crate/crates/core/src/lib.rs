//! Numerical evaluation of the two-parameter generalized Baskakov–Durrmeyer
//! operators A_n^{α,ρ} on [0, ∞).
//!
//! The family combines generalized Baskakov basis weights p_{n,k}^α(x),
//! indexed by a shape parameter α ∈ [0, 1], with Beta-type kernel densities
//! μ_{n,k}^ρ(t) indexed by ρ > 0:
//!
//!   A_n^{α,ρ}(f; x) = Σ_{k≥0} p_{n,k}^α(x) ∫₀^∞ μ_{n,k}^ρ(t) f(t) dt.
//!
//! The crate provides
//! - numerically stable evaluation of both basis families ([`basis`]),
//! - operator application with certified series truncation, exact
//!   Beta-ratio integration for polynomials and adaptive Gauss–Kronrod
//!   quadrature for general targets ([`operator`]),
//! - closed-form raw and central moments plus an independent series route
//!   that validates them ([`moments`]),
//! - moduli of continuity, pointwise error bounds, Voronovskaja limits and
//!   weighted-norm convergence gaps ([`bounds`]),
//! - reproducible error-comparison experiments with CSV/JSON output
//!   ([`experiment`]).
//!
//! All operations are pure functions of their arguments; grid evaluations
//! are parallelized with deterministic, input-ordered results.
//!
//! ```
//! use abd_core::{apply_operator, EvalOptions, FunctionSpec, OperatorParams};
//!
//! // A(e1; 1) = (nx + 1)/(n - 1) = 21/19 for the classical case α = 1, ρ = 1
//! let params = OperatorParams::new(20, 1.0, 1.0)?;
//! let value = apply_operator(&params, &FunctionSpec::monomial(1), 1.0, &EvalOptions::default())?;
//! assert!((value - 21.0 / 19.0).abs() < 1e-9);
//! # Ok::<(), abd_core::Error>(())
//! ```

pub mod basis;
pub mod bounds;
pub mod error;
pub mod experiment;
pub mod function;
pub mod moments;
pub mod operator;
pub mod quad;
pub mod special;

pub use basis::OperatorParams;
pub use bounds::{
    bound_c2, bound_lipschitz, bound_modulus, default_bound_interval, kfunctional_argument,
    modulus, second_modulus, voronovskaja_limit, voronovskaja_sequence, weighted_gap,
    BoundReport, Interval,
};
pub use error::{Error, Result};
pub use experiment::{
    run_experiment, write_curve_csv, ExperimentSpec, ExperimentSummary, FigurePreset, RhoSummary,
};
pub use function::{FunctionSpec, NamedFunction};
pub use moments::{moment_report, MomentKind, MomentReport};
pub use operator::{
    apply_operator, apply_with_diagnostics, error_curve, inner_integral, CurveRow, CurveTable,
    EvalOptions, SeriesDiagnostics,
};
