//! Exact rational linear algebra: sparse matrices, LP feasibility, cochain complexes,
//! double-description hulls and integer kernels.

mod complex;
mod hull;
mod lattice;
mod lp;
mod matrix;
mod rational;

use thiserror::Error;

pub use complex::{cohomology, is_quasi_iso, ChainComplexQ, CohomologyReport, QuasiIsoReport};
pub use hull::{convex_hull_facets, Facet};
pub use lattice::integer_kernel_basis;
pub use lp::{lp_strict_feasible, simplex_max, LinearConstraint, LpOutcome, SimplexResult};
pub use matrix::{determinant, determinant_sign, kernel_basis, rank, rref_dense, MatrixQ, Rref};
pub use rational::{
    dot, format_rational, int, lcm_of_denominators, make_primitive, parse_rational, primitive_integer, rat,
    serde_rational, sign, Rational,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactLaError {
    #[error("malformed rational {0:?}")]
    ParseRational(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("differential does not square to zero at degree {0}")]
    NotComplex(i32),
    #[error("map does not commute with the differentials at degree {0}")]
    NotChainMap(i32),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}
