//! Exact multivariate polynomials over the rationals, determinants,
//! Gröbner bases and a small text parser.

pub mod cache;
mod det;
mod groebner;
mod monomial;
mod parse;
mod polynomial;

use thiserror::Error;

pub use det::det;
pub use groebner::{groebner, GroebnerBasis, Ideal};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::parse_polynomial;
pub use polynomial::{PolyDisplay, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("matrix is not square ({rows} rows, row {row} has {cols} entries)")]
    NonSquare { rows: usize, row: usize, cols: usize },
    #[error("quotient dimensions need a homogeneous ideal")]
    NonHomogeneousIdeal,
    #[error("parse error at column {position}: {message}")]
    Parse { position: usize, message: String },
}
