use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::geometry::{full_dimensional_markings, PointSet};
use crate::secondary::SecondaryCache;
use crate::subdivision::Subdivision;

use super::infinity::InfinityConfig;
use super::mixed::MixedDifferential;
use super::RelativeError;

/// A subdivision of an infinite polygon with one finite cell Q′ whose lower boundary lies on
/// ∂₋P. The left handle λ runs from the left ray to Q′, the right handle ρ from Q′ to the right
/// ray; the infinite cells sit over the upper edges of Q′.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneFinite {
    pub polygon: PointSet,
    pub finite: PointSet,
    /// Vertices of λ, left to right, ending at the leftmost vertex of Q′.
    pub left_handle: Vec<usize>,
    /// Vertices of ρ, left to right, starting at the rightmost vertex of Q′.
    pub right_handle: Vec<usize>,
    /// Upper chain of Q′ (the sides facing ∞), left to right.
    pub upper: Vec<usize>,
    /// Infinite cells P₁ … P_m, left to right.
    pub infinite: Vec<PointSet>,
}

impl OneFinite {
    pub fn subdivision(&self) -> Subdivision {
        let mut cells = self.infinite.clone();
        cells.push(self.finite);
        Subdivision::new(self.polygon, cells)
    }

    pub fn has_handles(&self) -> bool {
        self.left_handle.len() > 1 || self.right_handle.len() > 1
    }
}

/// Enumerates 1-finite subdivisions of the infinite geometric polygon `p` by construction:
/// every finite geometric Q′ inside p whose lower chain is a run of consecutive edges of ∂₋P.
pub fn one_finite_subdivisions(ic: &InfinityConfig, p: PointSet) -> Result<Vec<OneFinite>, RelativeError> {
    let c = &ic.config;
    if !ic.is_infinite(p) || !c.is_geometric(p) {
        return Err(RelativeError::NotInfinitePolygon(c.describe(p)));
    }
    let chain = ic.lower_chain(p);
    let by_rank = |v: &usize| ic.rank(*v);
    let mut out = Vec::new();
    for q in full_dimensional_markings(c, true) {
        if ic.is_infinite(q) || !q.is_subset(p) {
            continue;
        }
        let (lower, upper) = split_boundary(ic, q);
        let Some(start) = chain.iter().position(|&v| v == lower[0]) else { continue };
        if chain.len() < start + lower.len() || chain[start..start + lower.len()] != lower[..] {
            continue;
        }
        let end = start + lower.len() - 1;
        let left_handle = chain[..=start].to_vec();
        let right_handle = chain[end..].to_vec();
        let m = upper.len() - 1;
        let mut corners: Vec<Vec<usize>> = Vec::new();
        for nu in 0..m {
            let mut verts = vec![upper[nu], upper[nu + 1], ic.infinity];
            if nu == 0 {
                verts.extend_from_slice(&left_handle);
            }
            if nu + 1 == m {
                verts.extend_from_slice(&right_handle);
            }
            corners.push(verts);
        }
        let infinite: Vec<PointSet> = corners.iter().map(|v| c.closure(v.iter().copied().collect())).collect();
        for (cell, verts) in infinite.iter().zip(&corners) {
            let expected: PointSet = verts.iter().copied().collect();
            if c.vertices(*cell) != expected || !cell.is_subset(p) {
                return Err(RelativeError::InvalidConstruction(c.describe(p), c.describe(q)));
            }
        }
        let total = infinite.iter().fold(c.volume(q), |acc, &b| acc + c.volume(b));
        if total != c.volume(p) {
            return Err(RelativeError::InvalidConstruction(c.describe(p), c.describe(q)));
        }
        let mut infinite = infinite;
        infinite.sort_by_key(|&b| ic.rays(b));
        let mut upper = upper;
        upper.sort_by_key(by_rank);
        out.push(OneFinite { polygon: p, finite: q, left_handle, right_handle, upper, infinite });
    }
    out.sort_by_key(|o| (o.finite, o.infinite.clone()));
    Ok(out)
}

/// Lower chain (sides away from ∞) and upper chain (sides facing ∞) of a finite polygon, both
/// left to right and sharing their endpoints.
pub fn split_boundary(ic: &InfinityConfig, q: PointSet) -> (Vec<usize>, Vec<usize>) {
    let c = &ic.config;
    let cycle = c.ccw_vertices(q);
    let n = cycle.len();
    let leftmost = (0..n).min_by_key(|&k| ic.rank(cycle[k])).expect("nonempty polygon");
    let rightmost = (0..n).max_by_key(|&k| ic.rank(cycle[k])).expect("nonempty polygon");
    // counter-clockwise from the leftmost vertex runs along the bottom first when ∞ is above
    let walk = |from: usize, to: usize| {
        let mut v = vec![cycle[from]];
        let mut k = from;
        while k != to {
            k = (k + 1) % n;
            v.push(cycle[k]);
        }
        v
    };
    let first = walk(leftmost, rightmost);
    let mut second = walk(rightmost, leftmost);
    second.reverse();
    // the chain whose first edge leaves ∞ on its left is the lower one
    if c.orient(&[first[0], first[1], ic.infinity]) > 0 {
        (first, second)
    } else {
        (second, first)
    }
}

/// The same subdivisions read off Σ(p): coarse subdivisions into geometric cells with exactly
/// one finite cell.
pub fn one_finite_from_secondary(
    ic: &InfinityConfig,
    cache: &SecondaryCache,
    p: PointSet,
) -> Result<BTreeSet<Subdivision>, RelativeError> {
    let c = &ic.config;
    let sp = cache.shallow(p)?;
    let mut out = BTreeSet::new();
    if sp.dim == 0 {
        return Ok(out);
    }
    for (_, face) in sp.faces_of_dim(sp.dim - 1) {
        let s = &face.subdivision;
        let finite = s.cells().iter().filter(|&&b| !ic.is_infinite(b)).count();
        if finite == 1 && s.cells().iter().all(|&b| c.is_geometric(b)) {
            out.insert(Subdivision::new(s.parent, s.cells().to_vec()));
        }
    }
    Ok(out)
}

/// The components of ψ: mixed entries grouped by number of finite cells, with the count of
/// nonzero matrix elements per group.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PsiComponents {
    /// Entry indices of the mixed differential per number of finite cells.
    pub entries: BTreeMap<usize, Vec<usize>>,
    /// Nonzero matrix elements per number of finite cells.
    pub matrix_elements: BTreeMap<usize, usize>,
}

impl PsiComponents {
    /// Entries of ψ_n for n ≥ 2, by n.
    pub fn higher(&self) -> BTreeMap<usize, usize> {
        self.entries.iter().filter(|(&n, _)| n >= 2).map(|(&n, v)| (n, v.len())).collect()
    }
}

pub fn extract_psi(ic: &InfinityConfig, md: &MixedDifferential) -> Result<PsiComponents, RelativeError> {
    let dt = md.decorate(ic)?;
    let entries = md.by_finite_count(ic);
    let mut matrix_elements = BTreeMap::new();
    for (&n, list) in &entries {
        let count: usize =
            list.iter().map(|&i| dt.entry_matrix(i).entries().filter(|(_, _, v)| !v.is_zero()).count()).sum();
        matrix_elements.insert(n, count);
    }
    Ok(PsiComponents { entries, matrix_elements })
}
