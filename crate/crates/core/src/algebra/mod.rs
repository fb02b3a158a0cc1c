//! Exact scalars, End(W) matrices and the Clifford algebra.

mod clifford;
mod matrix;
mod scalar;

pub use clifford::{blade_product, CliffordElem, GAMMA_SQUARE, MAX_DIM};
pub use matrix::MatrixW;
pub use scalar::{factorial, fmt_rational, parse_rational, rat, PiScalar, Rational, Scalar};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cannot add pi^{0} and pi^{1} terms")]
    PiPowerMismatch(i32, i32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    Singular,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}
