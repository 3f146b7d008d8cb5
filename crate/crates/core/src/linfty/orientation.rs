use fixedbitset::FixedBitSet;

use super::LinftyError;
use crate::exactla::{determinant_sign, rref_dense, Rational};
use crate::geometry::PointSet;
use crate::secondary::{SecondaryCache, SecondaryPolytope};

/// Orientation of Σ(owner): the reduced echelon basis of its linear span, in configuration
/// coordinates. It depends only on the subspace and the label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationClass {
    pub owner: PointSet,
    pub basis: Vec<Vec<Rational>>,
}

impl OrientationClass {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn orientation_class(sp: &SecondaryPolytope) -> OrientationClass {
    OrientationClass { owner: sp.marking, basis: sp.span.clone() }
}

/// Sign of the change of basis from `basis` to `vectors` (same span); 0 if `vectors` is dependent.
pub fn relative_orientation(vectors: &[Vec<Rational>], basis: &[Vec<Rational>]) -> i8 {
    assert_eq!(vectors.len(), basis.len(), "orientation comparison needs equal ranks");
    if basis.is_empty() {
        return 1;
    }
    let cols = basis[0].len();
    let pivots = rref_dense(basis.to_vec(), cols).pivots;
    assert_eq!(pivots.len(), basis.len(), "basis must be independent");
    let restrict = |rows: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
        rows.iter().map(|r| pivots.iter().map(|&j| r[j].clone()).collect()).collect()
    };
    determinant_sign(&restrict(vectors)) * determinant_sign(&restrict(basis))
}

/// Ordered basis of a face oriented as the product of `factors` in the given order.
fn product_basis(factors: &[&OrientationClass]) -> Vec<Vec<Rational>> {
    factors.iter().flat_map(|f| f.basis.iter().cloned()).collect()
}

/// Outward vector of the face `inner` inside the face `outer` (both vertex sets of `sp`).
fn outward(sp: &SecondaryPolytope, outer: &FixedBitSet, inner: &FixedBitSet) -> Vec<Rational> {
    let on = inner.ones().next().expect("faces are nonempty");
    let off = outer.ones().find(|&i| !inner.contains(i)).expect("inner face is proper");
    sp.gkz[on].iter().zip(&sp.gkz[off]).map(|(a, b)| a - b).collect()
}

/// Incidence [Σ : F] of a facet F (vertex set) oriented by the product of `factors`, against
/// the canonical orientation of Σ: +1 iff (outward normal, face basis) is positive.
pub fn facet_incidence(sp: &SecondaryPolytope, facet: &FixedBitSet, factors: &[&OrientationClass]) -> i8 {
    let mut top = FixedBitSet::with_capacity(sp.triangulations.len());
    top.insert_range(..);
    let mut vectors = vec![outward(sp, &top, facet)];
    vectors.extend(product_basis(factors));
    relative_orientation(&vectors, &sp.span)
}

/// Incidence between two faces of one lattice, each oriented by the product of the canonical
/// classes of its cells in sorted order.
pub fn incidence_sign(
    cache: &SecondaryCache,
    sp: &SecondaryPolytope,
    outer: usize,
    inner: usize,
) -> Result<i8, LinftyError> {
    let (fo, fi) = (&sp.faces[outer], &sp.faces[inner]);
    if fo.dim != fi.dim + 1 || !fi.vertices.is_subset(&fo.vertices) {
        return Err(LinftyError::NotFacet(outer, inner));
    }
    let classes = |cells: &[PointSet]| -> Result<Vec<OrientationClass>, LinftyError> {
        cells.iter().map(|&cell| Ok(orientation_class(&*cache.shallow(cell)?))).collect()
    };
    let outer_classes = classes(fo.subdivision.cells())?;
    let inner_classes = classes(fi.subdivision.cells())?;
    let outer_basis = product_basis(&outer_classes.iter().collect::<Vec<_>>());
    let mut vectors = vec![outward(sp, &fo.vertices, &fi.vertices)];
    vectors.extend(product_basis(&inner_classes.iter().collect::<Vec<_>>()));
    Ok(relative_orientation(&vectors, &outer_basis))
}
