//! Exact secondary polytopes, L∞ structure constants, Maurer-Cartan binomials and
//! directed Hochschild checks for rational point configurations.

pub mod coeff;
pub mod exactla;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod linfty;
pub mod mc;
pub mod relative;
pub mod secondary;
pub mod subdivision;

pub use exactla::{MatrixQ, Rational};
pub use geometry::{Config, MarkedPolytope, PointConfig, PointSet};
pub use subdivision::Subdivision;
