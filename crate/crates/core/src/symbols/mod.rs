//! Polyhomogeneous symbols with Clifford-matrix coefficients and their
//! composition calculus.

mod calculus;
mod classical;
mod hom;
mod xpoly;

pub use calculus::{
    ad_xi2, log_bracket, log_bracket_with, neumann_log, neumann_log_with, parametrix, star, star_bracket,
    star_exp, star_with, unit,
};
pub use classical::{ClassicalSymbol, LogSymbol, Trunc, FLOOR_EXACT};
pub use hom::{HomSymbol, Mono};
pub use xpoly::XPoly;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("leading symbol is not an invertible scalar times a power of |xi|: {0}")]
    NonInvertibleLeading(String),
    #[error("series needs a symbol of negative order, got order {0}")]
    NonNegativeOrder(i32),
    #[error("{0}")]
    Unbounded(String),
}
