use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Face, SecondaryError, SecondaryFacet, SecondaryPolytope};
use crate::exactla::{convex_hull_facets, dot, int, rref_dense, Rational};
use crate::geometry::{Config, PointSet};
use crate::subdivision::{
    enumerate_regular_triangulations, is_regular, lower_hull_subdivision, refines, Regularity, Subdivision,
};

/// φ_T(ω): total Lebesgue volume of the simplices of `t` having ω as a vertex.
pub fn gkz_vector(c: &Config, t: &Subdivision) -> Vec<Rational> {
    let mut phi = vec![Rational::zero(); c.len()];
    for &cell in t.cells() {
        let vol = &c.simplex(cell).expect("triangulation cells are simplices").volume;
        for v in cell.iter() {
            phi[v] += vol;
        }
    }
    phi
}

fn rank_of(points: &[&Vec<Rational>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let base = points[0];
    let rows: Vec<Vec<Rational>> =
        points[1..].iter().map(|p| p.iter().zip(base).map(|(x, y)| x - y).collect()).collect();
    rref_dense(rows, base.len()).pivots.len()
}

fn bitset(n: usize, items: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    for i in items {
        b.insert(i);
    }
    b
}

/// Σ(marking) with its full face lattice.
pub fn build_secondary_of(c: &Config, marking: PointSet, seed: u64) -> Result<SecondaryPolytope, SecondaryError> {
    build(c, marking, seed, true)
}

/// Σ(A) for the whole configuration.
pub fn build_secondary(c: &Config, seed: u64) -> Result<SecondaryPolytope, SecondaryError> {
    build_secondary_of(c, c.all(), seed)
}

/// Σ(marking) with only its facets and top face bound to subdivisions.
pub(crate) fn build_secondary_shallow(
    c: &Config,
    marking: PointSet,
    seed: u64,
) -> Result<SecondaryPolytope, SecondaryError> {
    build(c, marking, seed, false)
}

/// Coarse subdivisions of `(Conv(parent), parent)`, read off the facets of Σ(parent).
pub fn coarse_subdivisions_of(c: &Config, parent: PointSet, seed: u64) -> Result<Vec<Subdivision>, SecondaryError> {
    Ok(build_secondary_shallow(c, parent, seed)?.coarse_subdivisions())
}

fn build(c: &Config, marking: PointSet, seed: u64, full: bool) -> Result<SecondaryPolytope, SecondaryError> {
    if !c.is_full_dimensional(marking) {
        return Err(SecondaryError::NotFullDimensional(marking));
    }
    let n = c.len();
    let triangulations = enumerate_regular_triangulations(c, marking, seed);
    let gkz: Vec<Vec<Rational>> = triangulations.iter().map(|t| gkz_vector(c, t)).collect();
    let diffs: Vec<Vec<Rational>> =
        gkz[1..].iter().map(|g| g.iter().zip(&gkz[0]).map(|(x, y)| x - y).collect()).collect();
    let rref = rref_dense(diffs, n);
    let (span, pivots) = (rref.rows, rref.pivots);
    let dim = pivots.len();
    let projected: Vec<Vec<Rational>> = gkz.iter().map(|g| pivots.iter().map(|&p| g[p].clone()).collect()).collect();
    let m = triangulations.len();

    let facets: Vec<SecondaryFacet> = if dim == 0 {
        Vec::new()
    } else {
        convex_hull_facets(&projected)?
            .into_iter()
            .map(|f| {
                let mut normal = vec![Rational::zero(); n];
                for (&p, a) in pivots.iter().zip(&f.normal) {
                    normal[p] = Rational::from_integer(a.clone());
                }
                SecondaryFacet { normal, offset: Rational::from_integer(f.offset), vertices: f.incident }
            })
            .collect()
    };

    let mut vertex_sets: Vec<FixedBitSet> = Vec::new();
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let top = bitset(m, 0..m);
    seen.insert(top.clone());
    let mut frontier: Vec<FixedBitSet> = Vec::new();
    for f in &facets {
        if seen.insert(f.vertices.clone()) {
            frontier.push(f.vertices.clone());
            vertex_sets.push(f.vertices.clone());
        }
    }
    if full {
        while let Some(face) = frontier.pop() {
            for f in &facets {
                let mut meet = face.clone();
                meet.intersect_with(&f.vertices);
                if meet.count_ones(..) > 0 && seen.insert(meet.clone()) {
                    frontier.push(meet.clone());
                    vertex_sets.push(meet);
                }
            }
        }
    }
    vertex_sets.push(top);

    let bound: Vec<Result<Face, SecondaryError>> = vertex_sets
        .par_iter()
        .enumerate()
        .map(|(idx, verts)| {
            let pts: Vec<&Vec<Rational>> = verts.ones().map(|i| &projected[i]).collect();
            let fdim = rank_of(&pts);
            let subdivision = if verts.count_ones(..) == 1 {
                let t = verts.ones().next().expect("one vertex");
                triangulations[t].clone()
            } else {
                bind_face(c, marking, &triangulations, &facets, verts, seed ^ idx as u64)
                    .ok_or(SecondaryError::Unbindable(idx))?
            };
            let geometric = subdivision.cells().iter().all(|&cell| c.is_geometric(cell));
            Ok(Face { dim: fdim, vertices: verts.clone(), subdivision, geometric, children: vec![], parents: vec![] })
        })
        .collect();
    let mut faces: Vec<Face> = bound.into_iter().collect::<Result<_, _>>()?;
    faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.subdivision.cmp(&b.subdivision)));
    let count = faces.len();
    for i in 0..count {
        for j in 0..count {
            if faces[j].dim == faces[i].dim + 1 && faces[i].vertices.is_subset(&faces[j].vertices) {
                faces[i].parents.push(j);
                faces[j].children.push(i);
            }
        }
    }
    Ok(SecondaryPolytope { marking, dim, triangulations, gkz, span, pivots, facets, faces })
}

/// Lower hull of a relative-interior point of the face's normal cone: first the sum of the
/// normals of the facets containing it, then seeded positive combinations.
fn bind_face(
    c: &Config,
    marking: PointSet,
    triangulations: &[Subdivision],
    facets: &[SecondaryFacet],
    verts: &FixedBitSet,
    seed: u64,
) -> Option<Subdivision> {
    let containing: Vec<&SecondaryFacet> = facets.iter().filter(|f| verts.is_subset(&f.vertices)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..32 {
        let mut psi = vec![Rational::zero(); c.len()];
        for f in &containing {
            let w = if attempt == 0 { int(1) } else { int(rng.gen_range(1..=64)) };
            for (p, a) in psi.iter_mut().zip(&f.normal) {
                *p += a * &w;
            }
        }
        let s = lower_hull_subdivision(c, marking, &psi);
        let matches = triangulations.iter().enumerate().all(|(i, t)| refines(t, &s) == verts.contains(i));
        if matches {
            return Some(s);
        }
    }
    None
}

/// The face whose normal cone holds the certificate of `s`: the triangulations minimizing
/// ⟨ψ, φ_T⟩. `None` if that vertex set is not a face bound to `s`.
pub fn face_of_subdivision(
    c: &Config,
    sp: &SecondaryPolytope,
    s: &Subdivision,
) -> Result<Option<usize>, SecondaryError> {
    let psi = match &s.certificate {
        Some(psi) => psi.clone(),
        None => match is_regular(c, s)? {
            Regularity::Regular(psi) => psi,
            Regularity::NotRegular => return Ok(None),
        },
    };
    let values: Vec<Rational> = sp.gkz.iter().map(|g| dot(&psi, g)).collect();
    let Some(min) = values.iter().min() else {
        return Ok(None);
    };
    let verts = bitset(values.len(), values.iter().enumerate().filter(|(_, v)| *v == min).map(|(i, _)| i));
    Ok(sp.faces.iter().position(|f| f.vertices == verts && &f.subdivision == s))
}

/// The subdivision bound to a face.
pub fn face_to_subdivision(sp: &SecondaryPolytope, face: usize) -> &Subdivision {
    &sp.faces[face].subdivision
}
