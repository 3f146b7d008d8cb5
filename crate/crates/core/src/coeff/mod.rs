//! Systems of coefficients on oriented walls, tensor blocks over polytope boundaries, trace
//! contractions, and the structure maps decorated by them.

mod block;
mod contract;
mod space;
mod structure;

use thiserror::Error;

use crate::geometry::PointSet;

pub use block::{boundary_tensor, cell_walls, linear_tensor, polytope_block, stalk, subdivision_block, TensorBlock};
pub use contract::{concatenate, generalization_map, subdivision_contraction, Contraction};
pub use space::{CoefficientSystem, Wall, WallSpace};
pub use structure::{verify_q_squared, DecoratedTables, QSquaredFailure, QSquaredReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("walls do not match: {0}")]
    Mismatch(String),
    #[error("the fine subdivision does not refine the coarse one")]
    NotRefining,
    #[error("{0:?} contains ∞")]
    Infinite(PointSet),
    #[error("{0:?} is finite")]
    Finite(PointSet),
    #[error("linear tensor products need d = 2")]
    NotPlanar,
}
