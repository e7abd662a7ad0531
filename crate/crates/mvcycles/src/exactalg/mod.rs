//! Exact arithmetic kernels: rationals, sparse multivariate polynomials in
//! the unitriangular matrix entries, Laurent polynomials in `t`, and symbolic
//! matrices with exact determinants and exact division.
//!
//! All values are immutable after construction; operations are pure.

mod laurent;
mod matrix;
mod poly;

pub use laurent::{evaluate, evaluate_mono, t_coefficient, LaurentPoly};
pub use matrix::PolyMatrix;
pub use poly::{is_homogeneous, rat, weight_of_monomial, Mono, MultiPoly, Rat, Var};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// The requested quotient does not exist as a polynomial.
    #[error("non-exact polynomial division")]
    NonExactDivision,
    /// `evaluate` was given no value for a variable present in the input.
    #[error("missing entry for variable x_{row}_{col}")]
    MissingEntry { row: u8, col: u8 },
    #[error("parse error: {0}")]
    Parse(String),
}
