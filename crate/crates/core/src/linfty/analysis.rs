use std::collections::{BTreeMap, HashMap};

use super::{LinftyError, StructureTables, Variant};
use crate::exactla::{ChainComplexQ, MatrixQ};
use crate::geometry::{Config, PointSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyReport {
    /// Largest number of generators feeding a nonzero iterated composite; 0 without operations.
    pub r0: usize,
    pub config_size: usize,
    /// Whether r0 < |A|.
    pub bound_holds: bool,
}

/// Support-level nilpotency: a generator reached by a composite tree with r leaves lies in the
/// r-th term of the lower central series.
pub fn nilpotency_bound(c: &Config, t: &StructureTables) -> NilpotencyReport {
    let mut order: Vec<PointSet> = t.generators.iter().map(|g| g.marking).collect();
    order.sort_by_key(|b| (b.len(), *b));
    let mut leaves: HashMap<PointSet, usize> = HashMap::new();
    let mut r0 = 0;
    for b in order {
        let mut best = 1;
        let mut reached = false;
        for e in t.with_output(b) {
            reached = true;
            let total: usize = e.inputs.iter().map(|i| leaves.get(i).copied().unwrap_or(1)).sum();
            best = best.max(total);
        }
        if reached {
            r0 = r0.max(best);
        }
        leaves.insert(b, best);
    }
    let config_size = c.finite().len();
    NilpotencyReport { r0, config_size, bound_holds: r0 < config_size }
}

#[derive(Clone, Debug)]
pub struct ColumnReport {
    /// Markings B with Conv(B) = Q′, i.e. the vertices of Q′ plus a subset of its other points.
    pub column: Vec<PointSet>,
    pub betti: BTreeMap<i32, usize>,
    pub exact: bool,
    /// Exactness is expected iff Q′ contains configuration points that are not its vertices.
    pub expected_exact: bool,
}

impl ColumnReport {
    pub fn matches_expectation(&self) -> bool {
        if self.expected_exact {
            return self.exact;
        }
        self.betti.values().sum::<usize>() == 1
    }
}

/// Cohomology of the span of {e_B : Conv(B) = Conv(q)} under the arity-one operation of 𝔤̇.
pub fn marked_column_cohomology(c: &Config, t: &StructureTables, q: PointSet) -> Result<ColumnReport, LinftyError> {
    if t.variant != Variant::Marked {
        return Err(LinftyError::NeedsMarked);
    }
    let verts = c.vertices(q);
    let extra = c.closure(q).difference(verts);
    let extras = extra.to_vec();
    let mut column: Vec<PointSet> = (0u32..(1u32 << extras.len()))
        .map(|mask| extras.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).fold(verts, |b, (_, &p)| b.with(p)))
        .collect();
    column.sort();
    let degree = |b: PointSet| t.generator(b).map(|g| g.degree() as i32).expect("column markings are generators");
    let mut basis: BTreeMap<i32, Vec<PointSet>> = BTreeMap::new();
    for &b in &column {
        basis.entry(degree(b)).or_default().push(b);
    }
    let position: HashMap<PointSet, usize> =
        basis.values().flat_map(|v| v.iter().enumerate().map(|(i, &b)| (b, i))).collect();
    let mut diffs: BTreeMap<i32, MatrixQ> = BTreeMap::new();
    for (&k, src) in &basis {
        let Some(dst) = basis.get(&(k + 1)) else { continue };
        let mut m = MatrixQ::zeros(dst.len(), src.len());
        for e in t.arity(1) {
            let input = e.inputs[0];
            if let (Some(&j), Some(&i)) = (position.get(&input), position.get(&e.output)) {
                if degree(input) == k && column.contains(&e.output) {
                    m.add_to(i, j, &e.coefficient);
                }
            }
        }
        diffs.insert(k, m);
    }
    let labels: BTreeMap<i32, Vec<String>> =
        basis.iter().map(|(&k, v)| (k, v.iter().map(|&b| c.describe(b)).collect())).collect();
    let complex = ChainComplexQ::new(labels, diffs)?;
    let betti = complex.betti_numbers();
    let exact = betti.values().all(|&b| b == 0);
    Ok(ColumnReport { column, betti, exact, expected_exact: !extra.is_empty() })
}
