//! Point configurations, orientation predicates with a symbolic point at infinity,
//! hulls, circuits and marked subpolytopes.

mod circuits;
mod config;
mod pointset;
mod subpolytopes;

use thiserror::Error;

pub use circuits::{circuit_of, enumerate_circuits, enumerate_circuits_in, Circuit};
pub use config::{
    check_general_position, Config, GeneralPositionReport, HullFacet, LabeledPoint, PointConfig, PointRef, SimplexInfo,
    Violation, ViolationKind, INFINITY_LABEL,
};
pub use pointset::{PointSet, MAX_POINTS};
pub use subpolytopes::{
    enumerate_subpolytopes, enumerate_subpolytopes_split, full_dimensional_markings, MarkedPolytope,
    SubpolytopeFamilies,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("label {0:?} is reserved for the point at infinity")]
    ReservedLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("{0}")]
    Dimension(String),
    #[error("too many points ({0}); the engine supports at most 31")]
    TooManyPoints(usize),
    #[error("infinity direction must be nonzero")]
    ZeroDirection,
    #[error("configuration has no point at infinity")]
    NoInfinity,
    #[error("configuration is not in general position: {} violation(s), first {:?}", .0.violations.len(), .0.violations.first().map(|v| &v.labels))]
    GeneralPosition(GeneralPositionReport),
    #[error("could not certify a far point for infinity")]
    Certification,
}
