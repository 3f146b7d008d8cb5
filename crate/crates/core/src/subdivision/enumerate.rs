use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::lifting::lower_hull_subdivision;
use super::regularity::{is_regular, Regularity};
use super::Subdivision;
use crate::exactla::{int, Rational};
use crate::geometry::{Config, PointSet};

pub const RANDOM_LIFT_RANGE: i64 = 1 << 20;

/// Seeded random integer lifting on the parent marking (zero elsewhere).
pub fn random_lifting(c: &Config, parent: PointSet, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    (0..c.len()).map(|i| if parent.contains(i) { int(rng.gen_range(0..RANDOM_LIFT_RANGE)) } else { int(0) }).collect()
}

fn flips(c: &Config, t: &Subdivision) -> Vec<Subdivision> {
    let cells: HashSet<PointSet> = t.cells().iter().copied().collect();
    let mut out = Vec::new();
    if t.parent.len() < c.dim() + 2 {
        return out;
    }
    for z in t.parent.subsets_of_size(c.dim() + 2) {
        let circ = c.circuit(z);
        for (from, to) in [
            (circ.positive_triangulation(), circ.negative_triangulation()),
            (circ.negative_triangulation(), circ.positive_triangulation()),
        ] {
            if from.iter().all(|s| cells.contains(s)) {
                let mut next: Vec<PointSet> = t.cells().iter().copied().filter(|s| !from.contains(s)).collect();
                next.extend(to);
                out.push(Subdivision::new(t.parent, next));
            }
        }
    }
    out
}

/// Regular triangulations of `(Conv(parent), parent)` by breadth-first search over regular
/// flips from a seeded generic lower hull; canonically sorted, each with a certificate.
pub fn enumerate_regular_triangulations(c: &Config, parent: PointSet, seed: u64) -> Vec<Subdivision> {
    let d = c.dim();
    assert!(c.is_full_dimensional(parent), "parent must be full-dimensional");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = loop {
        let psi = random_lifting(c, parent, &mut rng);
        let s = lower_hull_subdivision(c, parent, &psi);
        if s.is_triangulation(d) {
            break s;
        }
    };
    let mut seen: HashSet<Subdivision> = HashSet::from([start.clone()]);
    let mut found = vec![start.clone()];
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let candidates: Vec<Subdivision> = frontier.iter().flat_map(|t| flips(c, t)).collect();
        let mut fresh: Vec<Subdivision> = Vec::new();
        for s in candidates {
            if seen.insert(s.clone()) {
                fresh.push(s);
            }
        }
        fresh.sort();
        let checked: Vec<Option<Subdivision>> = fresh
            .into_par_iter()
            .map(|s| match is_regular(c, &s) {
                Ok(Regularity::Regular(psi)) => Some(s.with_certificate(psi)),
                _ => None,
            })
            .collect();
        frontier = checked.into_iter().flatten().collect();
        found.extend(frontier.iter().cloned());
    }
    found.sort();
    found
}
