//! Secondary polytopes: GKZ vectors, the face lattice with its subdivisions, the
//! factorization of lower intervals, and dual webs for planar subdivisions.

mod build;
mod cache;
mod dot;
mod factor;
mod web;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::exactla::{ExactLaError, Rational};
use crate::geometry::PointSet;
use crate::subdivision::{Subdivision, SubdivisionError};

pub use build::{
    build_secondary, build_secondary_of, coarse_subdivisions_of, face_of_subdivision, face_to_subdivision, gkz_vector,
};
pub use cache::SecondaryCache;
pub use dot::{face_lattice_dot, web_dot};
pub use factor::{verify_factorization, FactorizationReport};
pub use web::{dual_web, Web, WebEdge, WebRay, WebVertex};

/// Facet `normal · φ >= offset` in configuration coordinates (normal supported on the pivots).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondaryFacet {
    pub normal: Vec<Rational>,
    pub offset: Rational,
    pub vertices: FixedBitSet,
}

#[derive(Clone, Debug)]
pub struct Face {
    pub dim: usize,
    /// Indices into the triangulation list.
    pub vertices: FixedBitSet,
    pub subdivision: Subdivision,
    pub geometric: bool,
    /// Faces of one dimension less below this one.
    pub children: Vec<usize>,
    /// Faces of one dimension more above this one.
    pub parents: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SecondaryPolytope {
    pub marking: PointSet,
    pub dim: usize,
    /// Regular triangulations, canonically sorted; they index the vertices.
    pub triangulations: Vec<Subdivision>,
    /// GKZ vectors in configuration coordinates.
    pub gkz: Vec<Vec<Rational>>,
    /// Reduced echelon basis of the linear span of the GKZ differences; its row order is the
    /// canonical orientation.
    pub span: Vec<Vec<Rational>>,
    /// Pivot columns of `span`.
    pub pivots: Vec<usize>,
    pub facets: Vec<SecondaryFacet>,
    /// Faces sorted by dimension, then subdivision; the top face is last.
    pub faces: Vec<Face>,
}

impl SecondaryPolytope {
    pub fn top(&self) -> usize {
        self.faces.len() - 1
    }

    /// Faces of the given dimension.
    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim == k)
    }

    /// Index of the face bound to the subdivision, if any.
    pub fn face_index(&self, s: &Subdivision) -> Option<usize> {
        self.faces.iter().position(|f| &f.subdivision == s)
    }

    /// Subdivisions attached to the facets of the polytope.
    pub fn coarse_subdivisions(&self) -> Vec<Subdivision> {
        if self.dim == 0 {
            return Vec::new();
        }
        let mut out: Vec<Subdivision> =
            self.faces.iter().filter(|f| f.dim + 1 == self.dim).map(|f| f.subdivision.clone()).collect();
        out.sort();
        out
    }

    /// Face counts by dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SecondaryError {
    #[error("marking {0:?} is not full-dimensional")]
    NotFullDimensional(PointSet),
    #[error("face {0} could not be bound to a subdivision")]
    Unbindable(usize),
    #[error("dual webs need d = 2")]
    NotPlanar,
    #[error("subdivision has no lifting certificate")]
    MissingCertificate,
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error(transparent)]
    Linear(#[from] ExactLaError),
}
