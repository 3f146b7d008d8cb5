use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use super::regularity::{is_coarse, is_regular, Regularity};
use super::{cells_compatible, star_triangulation, Subdivision};
use crate::geometry::{full_dimensional_markings, Config, PointSet};

/// A facet together with the side on which a cell is still missing.
type Wall = (PointSet, i8);

struct Candidate {
    cell: PointSet,
    tris: Vec<PointSet>,
    /// (facet, side of the cell's interior)
    facets: Vec<Wall>,
}

/// All tilings of `Conv(parent)` by the given candidate cells (as markings), found by
/// repeatedly filling the smallest open wall. Each tiling is produced once.
pub fn enumerate_tilings(c: &Config, parent: PointSet, candidates: &[PointSet]) -> Vec<Vec<PointSet>> {
    let cands: Vec<Candidate> = candidates
        .iter()
        .map(|&cell| Candidate {
            cell,
            tris: star_triangulation(c, cell),
            facets: c.facets(cell).into_iter().map(|f| (f.vertices, f.inner_sign)).collect(),
        })
        .collect();
    let mut by_wall: HashMap<Wall, Vec<usize>> = HashMap::new();
    for (i, cand) in cands.iter().enumerate() {
        for &w in &cand.facets {
            by_wall.entry(w).or_default().push(i);
        }
    }
    let boundary: BTreeSet<Wall> = c.facets(parent).into_iter().map(|f| (f.vertices, f.inner_sign)).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut filled = BTreeSet::new();
    search(c, &cands, &by_wall, boundary, &mut filled, &mut chosen, &mut out);
    out.sort();
    out
}

fn search(
    c: &Config,
    cands: &[Candidate],
    by_wall: &HashMap<Wall, Vec<usize>>,
    open: BTreeSet<Wall>,
    filled: &mut BTreeSet<Wall>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<PointSet>>,
) {
    let Some(&wall) = open.iter().next() else {
        let mut cells: Vec<PointSet> = chosen.iter().map(|&i| cands[i].cell).collect();
        cells.sort();
        out.push(cells);
        return;
    };
    let Some(options) = by_wall.get(&wall) else { return };
    'next: for &i in options {
        let cand = &cands[i];
        for &j in chosen.iter() {
            if !cells_compatible(c, &cand.tris, &cands[j].tris) {
                continue 'next;
            }
        }
        let mut next_open = open.clone();
        let mut added = Vec::new();
        for &(f, side) in &cand.facets {
            if filled.contains(&(f, side)) {
                for w in added {
                    filled.remove(&w);
                }
                continue 'next;
            }
            if !next_open.remove(&(f, side)) {
                next_open.insert((f, -side));
            }
            filled.insert((f, side));
            added.push((f, side));
        }
        chosen.push(i);
        search(c, cands, by_wall, next_open, filled, chosen, out);
        chosen.pop();
        for w in added {
            filled.remove(&w);
        }
    }
}

/// Oracle: every triangulation by simplices of the parent marking, filtered by the LP.
pub fn brute_force_regular_triangulations(c: &Config, parent: PointSet) -> Vec<Subdivision> {
    let simplices = c.simplices_in(parent);
    let tilings = enumerate_tilings(c, parent, &simplices);
    let mut out: Vec<Subdivision> = tilings
        .into_par_iter()
        .filter_map(|cells| {
            let s = Subdivision::new(parent, cells);
            match is_regular(c, &s) {
                Ok(Regularity::Regular(psi)) => Some(s.with_certificate(psi)),
                _ => None,
            }
        })
        .collect();
    out.sort();
    out
}

/// Oracle: every proper tiling by full-dimensional sub-markings, filtered by regularity and
/// coarseness.
pub fn brute_force_coarse_subdivisions(c: &Config, parent: PointSet) -> Vec<Subdivision> {
    let cells: Vec<PointSet> =
        full_dimensional_markings(c, false).into_iter().filter(|b| b.is_subset(parent)).collect();
    let tilings = enumerate_tilings(c, parent, &cells);
    let mut out: Vec<Subdivision> = tilings
        .into_par_iter()
        .filter_map(|cells| {
            let s = Subdivision::new(parent, cells);
            is_coarse(c, &s).ok().filter(|&b| b).map(|_| s)
        })
        .collect();
    out.sort();
    out
}
