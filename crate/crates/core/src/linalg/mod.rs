//! Exact rational linear algebra.

mod matrix;
mod rational;

pub use matrix::{in_span, BareissTrace, EchelonBasis, RationalMatrix};
pub use rational::{parse_rational, render_rational, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected {expected} entries for the matrix shape, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("vector length {found} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}
