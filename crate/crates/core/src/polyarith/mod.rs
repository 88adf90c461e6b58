//! Exact sparse multivariate polynomials over the rationals.
//!
//! Every closed-form polynomial used by the crate (the cylinder form, the
//! generatrix generators, the complementary-variety components) lives on
//! [`SparsePoly`]. Coefficients are arbitrary-precision rationals; floats only
//! appear at evaluation and fitting boundaries.

mod fit;
mod poly;
mod text;

pub use fit::{fit_implicit, fit_implicit_complex, monomial_basis, ImplicitSurfaceModel};
pub use poly::{Monomial, SparsePoly};
pub(crate) use poly::rational_to_f64;
pub(crate) use text::parse_rational;

use thiserror::Error;

/// Errors raised by polynomial construction, evaluation and fitting.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("dimension mismatch: polynomial has {expected} variables, point has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("variable sets differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("need at least {required} samples for a basis of {basis} monomials, got {got}")]
    TooFewSamples {
        required: usize,
        basis: usize,
        got: usize,
    },
    #[error(
        "evaluation matrix is rank deficient by more than one \
         (sigma_second/sigma_min = {gap:.3e} < {required})"
    )]
    AmbiguousFit { gap: f64, required: f64 },
    #[error("singular value decomposition did not converge")]
    SvdFailed,
}
