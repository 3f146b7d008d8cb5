//! Orientation calculus on secondary polytopes and the L∞ structure constants built from it:
//! the differential on S(V), its square, nilpotency and the marked column complexes.

mod analysis;
mod dsquared;
mod orientation;
mod tables;

use thiserror::Error;

use crate::exactla::ExactLaError;
use crate::secondary::SecondaryError;

pub use analysis::{marked_column_cohomology, nilpotency_bound, ColumnReport, NilpotencyReport};
pub use dsquared::{koszul_sort, verify_d_squared, DSquaredReport, Residual};
pub use orientation::{facet_incidence, incidence_sign, orientation_class, relative_orientation, OrientationClass};
pub use tables::{
    build_structure_tables, build_structure_tables_in, build_tables_with, generators_of, Generator, StructureTables,
    TableEntry, Variant,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinftyError {
    #[error("faces {0} and {1} are not a codimension-one pair")]
    NotFacet(usize, usize),
    #[error("column complex needs the marked variant")]
    NeedsMarked,
    #[error(transparent)]
    Secondary(#[from] SecondaryError),
    #[error(transparent)]
    Linear(#[from] ExactLaError),
}
