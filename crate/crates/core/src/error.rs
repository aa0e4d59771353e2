//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Evaluation at a point where a negative power of `r` blows up.
    #[error("evaluation at r = 0 with negative radial exponent {exponent}")]
    SingularEvaluation { exponent: i32 },

    /// Name not present in the operator catalogue.
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),

    /// Name not present in the mutation registry.
    #[error("unknown mutation `{0}`")]
    UnknownMutation(String),

    /// Quantum numbers violating the sector constraints.
    #[error("invalid quantum numbers (l={l}, two_n={two_n}, e1={e1}, e2={e2}): {reason}")]
    InvalidQuantumNumbers {
        l: u32,
        two_n: u32,
        e1: u8,
        e2: u8,
        reason: &'static str,
    },

    /// Model parameter outside its admissible range.
    #[error("parameter {name} = {value} out of range: {reason}")]
    ParamOutOfRange {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    /// Bound states require an attractive coupling.
    #[error("no bound states for alpha = {alpha} (requires alpha < 0)")]
    NotBoundState { alpha: String },

    /// Malformed `p/q` literal.
    #[error("cannot parse `{0}` as a rational")]
    ParseRational(String),

    /// Exponential decay rates in terms must be nonnegative.
    #[error("negative decay rate {0} in term")]
    NonPositiveDecay(String),

    /// Requested quadrature order cannot integrate the integrand exactly.
    #[error("quadrature order {order} insufficient for polynomial degree {degree}")]
    QuadratureExactness { order: usize, degree: usize },

    /// Inner products are exact only for the polynomial-times-decay class.
    #[error("integrand outside the exact quadrature class: {0}")]
    NonPolynomialIntegrand(String),

    /// Symmetric tridiagonal eigensolver failed to converge.
    #[error("eigenvalue iteration failed to converge after {0} sweeps")]
    EigenNoConvergence(usize),

    /// An exact check that should have produced zero did not.
    #[error("invariant `{check}` violated: {detail}")]
    InvariantViolation { check: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
