//! Regular subdivisions of marked polytopes: lower hulls, regularity and coarseness
//! certificates, refinement, flip enumeration and brute-force oracles.

mod enumerate;
mod lifting;
mod regularity;
mod walls;

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use num_traits::Zero;
use thiserror::Error;

use crate::exactla::{ExactLaError, Rational};
use crate::geometry::{Config, PointSet};

pub use enumerate::{enumerate_regular_triangulations, random_lifting, RANDOM_LIFT_RANGE};
pub use lifting::lower_hull_subdivision;
pub use regularity::{is_coarse, is_regular, pw_affine_dim, reduced_dim, refines, Regularity};
pub use walls::{brute_force_coarse_subdivisions, brute_force_regular_triangulations, enumerate_tilings};

/// Polyhedral subdivision of the marked polytope `(Conv(parent), parent)` into marked cells.
/// Identity (equality, order, hashing) ignores the certificate.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub parent: PointSet,
    cells: Vec<PointSet>,
    /// Lifting values indexed by configuration point; zero outside the parent marking.
    pub certificate: Option<Vec<Rational>>,
}

impl Subdivision {
    pub fn new(parent: PointSet, mut cells: Vec<PointSet>) -> Self {
        cells.sort();
        cells.dedup();
        Subdivision { parent, cells, certificate: None }
    }

    /// The one-cell subdivision `{(Q, parent)}`.
    pub fn trivial(parent: PointSet) -> Self {
        Subdivision::new(parent, vec![parent])
    }

    pub fn with_certificate(mut self, psi: Vec<Rational>) -> Self {
        self.certificate = Some(psi);
        self
    }

    pub fn cells(&self) -> &[PointSet] {
        &self.cells
    }

    pub fn is_triangulation(&self, d: usize) -> bool {
        self.cells.iter().all(|c| c.len() == d + 1)
    }

    pub fn is_trivial(&self) -> bool {
        self.cells.len() == 1 && self.cells[0] == self.parent
    }

    /// Union of the cell markings.
    pub fn support(&self) -> PointSet {
        self.cells.iter().fold(PointSet::EMPTY, |a, &c| a.union(c))
    }

    /// The cell containing `sub` in its marking, if any.
    pub fn cell_containing(&self, sub: PointSet) -> Option<PointSet> {
        self.cells.iter().copied().find(|c| sub.is_subset(*c))
    }

    pub fn describe(&self, c: &Config) -> String {
        let cells: Vec<String> = self.cells.iter().map(|&x| c.describe(x)).collect();
        format!("[{}]", cells.join(" "))
    }
}

impl PartialEq for Subdivision {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.cells == other.cells
    }
}

impl Eq for Subdivision {}

impl Hash for Subdivision {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.parent.hash(state);
        self.cells.hash(state);
    }
}

impl Ord for Subdivision {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parent.cmp(&other.parent).then_with(|| self.cells.cmp(&other.cells))
    }
}

impl PartialOrd for Subdivision {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubdivisionError {
    #[error("cell {0:?} is not inside the parent marking")]
    CellOutsideParent(PointSet),
    #[error("cell {0:?} is not full-dimensional")]
    LowerDimensionalCell(PointSet),
    #[error("cells {0:?} and {1:?} overlap")]
    Overlap(PointSet, PointSet),
    #[error("cell volumes do not add up to the parent volume")]
    VolumeMismatch,
    #[error("subdivisions have different parents")]
    ParentMismatch,
    #[error(transparent)]
    Linear(#[from] ExactLaError),
}

/// Star triangulation of a cell from its first vertex (cells have simplicial facets).
pub(crate) fn star_triangulation(c: &Config, cell: PointSet) -> Vec<PointSet> {
    if cell.len() == c.dim() + 1 {
        return vec![cell];
    }
    let verts = c.vertices(cell);
    let apex = verts.first().expect("nonempty cell");
    c.facets(cell).into_iter().filter(|f| !f.vertices.contains(apex)).map(|f| f.vertices.with(apex)).collect()
}

pub(crate) fn cells_compatible(c: &Config, a: &[PointSet], b: &[PointSet]) -> bool {
    a.iter().all(|&s| b.iter().all(|&t| c.properly_intersect(s, t)))
}

/// Tiling check: cells inside the parent, full-dimensional, pairwise proper, volumes adding up.
pub fn validate(c: &Config, s: &Subdivision) -> Result<(), SubdivisionError> {
    let mut total = Rational::zero();
    let mut tris = Vec::with_capacity(s.cells.len());
    for &cell in &s.cells {
        if !cell.is_subset(s.parent) {
            return Err(SubdivisionError::CellOutsideParent(cell));
        }
        if !c.is_full_dimensional(cell) {
            return Err(SubdivisionError::LowerDimensionalCell(cell));
        }
        total += c.volume(cell);
        tris.push(star_triangulation(c, cell));
    }
    for i in 0..s.cells.len() {
        for j in i + 1..s.cells.len() {
            if !cells_compatible(c, &tris[i], &tris[j]) {
                return Err(SubdivisionError::Overlap(s.cells[i], s.cells[j]));
            }
        }
    }
    if total != c.volume(s.parent) {
        return Err(SubdivisionError::VolumeMismatch);
    }
    Ok(())
}
