//! Exact symbolic calculus for the residue density of the logarithm of a
//! generalised Laplacian.
//!
//! Symbols carry polynomial x-dependence and Clifford-matrix coefficients over
//! the Gaussian rationals, so every residue is an exact rational multiple of a
//! power of π.

pub mod algebra;
pub mod geometry;
pub mod logexpand;
pub mod random;
pub mod residue;
pub mod selftest;
pub mod symbols;
