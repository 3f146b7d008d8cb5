use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{CoefficientSystem, DecoratedTables};
use crate::exactla::Rational;
use crate::geometry::PointSet;
use crate::secondary::SecondaryCache;

use super::algebra::{build_r_infty, TriangularAlgebra};
use super::hochschild::{directed_hochschild, rank_of, Cochain, CochainVector, DirectedHochschild};
use super::infinity::InfinityConfig;
use super::mixed::{mixed_differential, MixedDifferential};
use super::psi::extract_psi;
use super::RelativeError;

/// Basis element of 𝔤: a finite geometric polygon and a coefficient basis index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GElement {
    pub cell: PointSet,
    pub index: usize,
    /// 1 + dim Σ plus the coefficient degree.
    pub degree: i32,
}

/// Ψ₁ on the basis of 𝔤, together with the terms that left the directed complex.
#[derive(Clone, Debug)]
pub struct Psi1 {
    pub source: Vec<GElement>,
    pub images: Vec<CochainVector>,
    pub escaped: Vec<(GElement, Cochain)>,
}

/// Ψ₁(w) = Q(w ⊗ −): the one-finite-cell entries with finite input w, read as cochains
/// (sR)^{⊗m} → sR.
pub fn psi_one(
    ic: &InfinityConfig,
    md: &MixedDifferential,
    dt: &DecoratedTables,
    r: &TriangularAlgebra,
    h: &DirectedHochschild,
) -> Psi1 {
    let mut source = Vec::new();
    for g in md.tables.generators.iter().filter(|g| !ic.is_infinite(g.marking)) {
        for index in 0..dt.block(g.marking).dim() {
            source.push(GElement { cell: g.marking, index, degree: dt.degree(g.marking, index) + 1 });
        }
    }
    let one_finite = md.by_finite_count(ic).remove(&1).unwrap_or_default();
    let mut images = Vec::with_capacity(source.len());
    let mut escaped = Vec::new();
    for w in &source {
        let mut image = CochainVector::new();
        for &i in &one_finite {
            let e = &md.tables.entries[i];
            if e.inputs[0] != w.cell {
                continue;
            }
            let cells = &e.inputs[1..];
            let dims: Vec<usize> = cells.iter().map(|&b| dt.block(b).dim()).collect();
            for tuple in mixed_radix(&dims) {
                let mut args = vec![w.index];
                args.extend_from_slice(&tuple);
                let Some((z, v)) = dt.apply_entry(i, &args) else { continue };
                let inputs =
                    cells.iter().zip(&tuple).map(|(&b, &y)| r.element(b, y).expect("infinite cell of R")).collect();
                let f = Cochain { inputs, output: r.element(e.output, z).expect("infinite polygon of R") };
                match h.index_of(&f) {
                    Some(k) => *image.entry(k).or_insert_with(Rational::zero) += v,
                    None => escaped.push((*w, f)),
                }
            }
        }
        image.retain(|_, v| !v.is_zero());
        images.push(image);
    }
    Psi1 { source, images, escaped }
}

fn mixed_radix(dims: &[usize]) -> Vec<Vec<usize>> {
    dims.iter().fold(vec![Vec::new()], |acc, &n| {
        acc.into_iter().flat_map(|t| (0..n).map(move |x| [t.clone(), vec![x]].concat())).collect()
    })
}

/// Handle length of a cochain: edges shared by the start or the end of the forward path
/// ∂₋P₁ … ∂₋P_n and the return path ∂₋P₀.
pub fn handle_length(ic: &InfinityConfig, r: &TriangularAlgebra, f: &Cochain) -> usize {
    let (forward, back) = paths(ic, r, f);
    let prefix = common_edges(forward.iter(), back.iter());
    if prefix + 1 == forward.len() && prefix + 1 == back.len() {
        return prefix;
    }
    prefix + common_edges(forward.iter().rev(), back.iter().rev())
}

fn paths(ic: &InfinityConfig, r: &TriangularAlgebra, f: &Cochain) -> (Vec<usize>, Vec<usize>) {
    let mut forward: Vec<usize> = Vec::new();
    for &x in &f.inputs {
        let chain = ic.lower_chain(r.elements[x].cell);
        let skip = usize::from(!forward.is_empty());
        forward.extend_from_slice(&chain[skip..]);
    }
    (forward, ic.lower_chain(r.elements[f.output].cell))
}

fn common_edges<'a>(a: impl Iterator<Item = &'a usize>, b: impl Iterator<Item = &'a usize>) -> usize {
    a.zip(b).take_while(|(x, y)| x == y).count().saturating_sub(1)
}

/// Vertex set of the closed path of a cochain when it bounds a convex polygon whose upper chain
/// is the forward path and whose lower chain is ∂₋P₀.
pub fn convex_cycle(ic: &InfinityConfig, r: &TriangularAlgebra, f: &Cochain) -> Option<PointSet> {
    let (forward, back) = paths(ic, r, f);
    let mut cycle = forward.clone();
    cycle.extend(back.iter().rev().skip(1).take(back.len().saturating_sub(2)));
    let set: PointSet = cycle.iter().copied().collect();
    if cycle.len() < 3 || set.len() != cycle.len() {
        return None;
    }
    let n = cycle.len();
    let turns: BTreeSet<i8> =
        (0..n).map(|k| ic.config.orient(&[cycle[k], cycle[(k + 1) % n], cycle[(k + 2) % n]])).collect();
    // interior lies on the side of the forward path away from ∞
    let away = -ic.config.orient(&[cycle[0], cycle[1], ic.infinity]);
    (turns.len() == 1 && turns.contains(&away)).then_some(set)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FiltrationReport {
    /// Every δ term lands on a strict-chain cochain.
    pub preserves_strict_chains: bool,
    /// δ never lowers the handle length.
    pub preserves_filtration: bool,
    /// Each generator of 𝔤 has exactly one handle-free summand, bounding its polygon.
    pub one_handle_free_summand: bool,
    /// Handle-free summands hit by Ψ₁ are exactly those whose paths bound convex polygons.
    pub gr0_image_is_convex: bool,
    /// Cochains per handle length.
    pub handle_lengths: BTreeMap<usize, usize>,
    pub gr0_betti: BTreeMap<i32, usize>,
    pub gr0_quasi_iso: bool,
    pub g1_betti: BTreeMap<i32, usize>,
}

impl FiltrationReport {
    pub fn passes(&self) -> bool {
        self.preserves_strict_chains
            && self.preserves_filtration
            && self.one_handle_free_summand
            && self.gr0_image_is_convex
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct UniversalityReport {
    pub g_dims: BTreeMap<i32, usize>,
    pub hochschild_betti: BTreeMap<i32, usize>,
    /// Rank of H(Ψ₁) per degree.
    pub induced_ranks: BTreeMap<i32, usize>,
    pub quasi_iso: bool,
    pub psi_higher_components: BTreeMap<usize, usize>,
    pub mixed_d_squared: bool,
    pub hochschild_d_squared: bool,
    pub lands_in_directed: bool,
    pub chain_map: bool,
    pub degree_preserving: bool,
    /// Degrees where H(C⃗) and 𝔤 disagree.
    pub mismatched_degrees: Vec<i32>,
    pub cochains: usize,
    pub filtration: FiltrationReport,
}

impl UniversalityReport {
    /// All structural assertions hold (the quasi-isomorphism verdict is reported separately).
    pub fn structure_holds(&self) -> bool {
        self.mixed_d_squared
            && self.hochschild_d_squared
            && self.lands_in_directed
            && self.chain_map
            && self.degree_preserving
            && self.filtration.passes()
    }
}

/// Builds Ψ₁: 𝔤 → C⃗^{≥1}(R∞, R∞)[1] and compares cohomology degree by degree.
pub fn verify_universality(
    ic: &InfinityConfig,
    cs: &CoefficientSystem,
    seed: u64,
) -> Result<UniversalityReport, RelativeError> {
    if ic.config.dim() != 2 {
        return Err(RelativeError::Dimension(ic.config.dim()));
    }
    if ic.finite_count() < 3 {
        return Err(RelativeError::TooFewPoints(ic.finite_count()));
    }
    let cache = SecondaryCache::new(&ic.config, seed);
    let md = mixed_differential(ic, cs, &cache)?;
    let mixed = md.verify(ic)?;
    let dt = md.decorate(ic)?;
    let r = build_r_infty(ic, &md, &dt)?;
    let h = directed_hochschild(&r);
    let psi = psi_one(ic, &md, &dt, &r, &h);
    let psi_higher_components = extract_psi(ic, &md)?.higher();

    let mut g_dims: BTreeMap<i32, usize> = BTreeMap::new();
    for w in &psi.source {
        *g_dims.entry(w.degree).or_insert(0) += 1;
    }
    let degree_preserving =
        psi.source.iter().zip(&psi.images).all(|(w, img)| img.keys().all(|&k| h.degrees[k] == w.degree));
    let chain_map = psi.images.par_iter().all(|img| h.apply(img).is_empty());
    let hochschild_betti = h.betti();
    let induced_ranks = induced_ranks(&h, &psi, |_| true);
    let degrees: BTreeSet<i32> = g_dims.keys().chain(hochschild_betti.keys()).copied().collect();
    let mismatched_degrees: Vec<i32> = degrees
        .into_iter()
        .filter(|d| {
            let g = g_dims.get(d).copied().unwrap_or(0);
            hochschild_betti.get(d).copied().unwrap_or(0) != g || induced_ranks.get(d).copied().unwrap_or(0) != g
        })
        .collect();
    let filtration = filtration_report(ic, &r, &h, &psi);
    Ok(UniversalityReport {
        quasi_iso: mismatched_degrees.is_empty() && chain_map && psi.escaped.is_empty(),
        g_dims,
        hochschild_betti,
        induced_ranks,
        psi_higher_components,
        mixed_d_squared: mixed.passes(),
        hochschild_d_squared: h.d_squared_failures().is_empty(),
        lands_in_directed: psi.escaped.is_empty(),
        chain_map,
        degree_preserving,
        mismatched_degrees,
        cochains: h.len(),
        filtration,
    })
}

/// Rank of the map induced by Ψ₁ on cohomology of the selected subquotient, per degree.
fn induced_ranks(h: &DirectedHochschild, psi: &Psi1, keep: impl Fn(usize) -> bool + Sync) -> BTreeMap<i32, usize> {
    let mut by_degree: BTreeMap<i32, Vec<CochainVector>> = BTreeMap::new();
    for (w, img) in psi.source.iter().zip(&psi.images) {
        let projected: CochainVector = img.iter().filter(|(&k, _)| keep(k)).map(|(&k, v)| (k, v.clone())).collect();
        by_degree.entry(w.degree).or_default().push(projected);
    }
    by_degree
        .into_par_iter()
        .map(|(d, images)| {
            let boundaries = h.coboundaries(d, &keep);
            let base = rank_of(&boundaries, h.len());
            let mut all = boundaries;
            all.extend(images);
            (d, rank_of(&all, h.len()) - base)
        })
        .collect()
}

fn filtration_report(
    ic: &InfinityConfig,
    r: &TriangularAlgebra,
    h: &DirectedHochschild,
    psi: &Psi1,
) -> FiltrationReport {
    let lengths: Vec<usize> = h.cochains.par_iter().map(|f| handle_length(ic, r, f)).collect();
    let preserves_filtration =
        h.differential.iter().enumerate().all(|(k, v)| v.keys().all(|&j| lengths[j] >= lengths[k]));
    let mut handle_lengths = BTreeMap::new();
    for &l in &lengths {
        *handle_lengths.entry(l).or_insert(0) += 1;
    }
    let shape = |k: usize| {
        let f = &h.cochains[k];
        (f.inputs.iter().map(|&x| r.elements[x].cell).collect::<Vec<_>>(), r.elements[f.output].cell)
    };
    let mut hit: BTreeSet<(Vec<PointSet>, PointSet)> = BTreeSet::new();
    let mut one_handle_free_summand = true;
    for (w, img) in psi.source.iter().zip(&psi.images) {
        let free: BTreeSet<(Vec<PointSet>, PointSet)> =
            img.keys().filter(|&&k| lengths[k] == 0).map(|&k| shape(k)).collect();
        let bounds_own_polygon = free.len() == 1
            && img
                .keys()
                .filter(|&&k| lengths[k] == 0)
                .all(|&k| convex_cycle(ic, r, &h.cochains[k]) == Some(ic.config.vertices(w.cell)));
        one_handle_free_summand &= bounds_own_polygon;
        hit.extend(free);
    }
    let convex: BTreeSet<(Vec<PointSet>, PointSet)> =
        (0..h.len()).filter(|&k| lengths[k] == 0 && convex_cycle(ic, r, &h.cochains[k]).is_some()).map(shape).collect();
    let free = |k: usize| lengths[k] == 0;
    let gr0_betti = h.sub_betti(free);
    let gr0_ranks = induced_ranks(h, psi, free);
    let mut gr0_dims: BTreeMap<i32, usize> = BTreeMap::new();
    for w in &psi.source {
        *gr0_dims.entry(w.degree).or_insert(0) += 1;
    }
    let gr0_quasi_iso =
        gr0_betti == gr0_dims && gr0_ranks.into_iter().filter(|&(_, n)| n > 0).collect::<BTreeMap<_, _>>() == gr0_dims;
    FiltrationReport {
        preserves_strict_chains: h.escaped_terms == 0,
        preserves_filtration,
        one_handle_free_summand,
        gr0_image_is_convex: hit == convex,
        handle_lengths,
        gr0_betti,
        gr0_quasi_iso,
        g1_betti: h.sub_betti(|k| lengths[k] >= 1),
    }
}
