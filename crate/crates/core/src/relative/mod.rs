//! The point at infinity: the split of 𝔤̃ into 𝔤 and the ideal 𝔤∞, the triangular algebras
//! of a line and of the rays through ∞, the mixed differential on S(V) ⊗ T(V∞), the component ψ,
//! the directed Hochschild complex and the comparison map Ψ₁.

mod algebra;
mod hochschild;
mod infinity;
mod mixed;
mod psi;
mod universality;

use thiserror::Error;

use crate::coeff::CoeffError;
use crate::geometry::{GeometryError, PointSet};
use crate::linfty::LinftyError;
use crate::secondary::SecondaryError;

pub use algebra::{build_r_1d, build_r_infty, union_is_product, BasisElement, TensorResidual, TriangularAlgebra};
pub use hochschild::{directed_hochschild, rank_of, Cochain, CochainVector, DirectedHochschild};
pub use infinity::{attach_infinity, InfinityConfig};
pub use mixed::{mixed_differential, MixedDifferential, MixedReport, SplitTables};
pub use psi::{
    extract_psi, one_finite_from_secondary, one_finite_subdivisions, split_boundary, OneFinite, PsiComponents,
};
pub use universality::{
    convex_cycle, handle_length, psi_one, verify_universality, FiltrationReport, GElement, Psi1, UniversalityReport,
};

#[derive(Debug, Error)]
pub enum RelativeError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Secondary(#[from] SecondaryError),
    #[error(transparent)]
    Linfty(#[from] LinftyError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("configuration has no point at infinity")]
    NoInfinity,
    #[error("unsupported dimension {0}")]
    Dimension(usize),
    #[error("need at least 3 finite points, got {0}")]
    TooFewPoints(usize),
    #[error("coefficients declared on the wall {0:?} through ∞")]
    CoefficientThroughInfinity(PointSet),
    #[error("{0} is not an infinite geometric polygon")]
    NotInfinitePolygon(String),
    #[error("the finite cell {1} does not produce a subdivision of {0}")]
    InvalidConstruction(String, String),
    #[error("closure property violated by an entry with output {0}")]
    Closure(String),
}
