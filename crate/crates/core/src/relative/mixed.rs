use std::collections::BTreeMap;

use crate::coeff::{verify_q_squared, CoefficientSystem, DecoratedTables, QSquaredReport};
use crate::geometry::{full_dimensional_markings, PointSet};
use crate::linfty::{build_tables_with, StructureTables, TableEntry, Variant};
use crate::secondary::SecondaryCache;

use super::infinity::InfinityConfig;
use super::RelativeError;

/// D on S(V) ⊗ T(V∞): one entry per geometric subpolygon of Ã and coarse subdivision into
/// geometric cells, inputs listed finite cells first (sorted), then infinite cells left to right.
#[derive(Clone, Debug)]
pub struct MixedDifferential {
    pub tables: StructureTables,
    pub system: CoefficientSystem,
}

/// Entry indices of the tables of 𝔤̃ by the finite/infinite type of output and inputs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitTables {
    /// Finite output, finite inputs: 𝔤.
    pub finite: Vec<usize>,
    /// Infinite output, infinite inputs: 𝔤∞.
    pub infinite: Vec<usize>,
    /// Infinite output, inputs of both kinds.
    pub mixed: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct MixedReport {
    pub q_squared: QSquaredReport,
    /// Composites whose infinite cells would leave left-to-right order.
    pub word_order_violations: Vec<(PointSet, Vec<PointSet>)>,
    /// Entries breaking the subalgebra or ideal property.
    pub ideal_violations: Vec<TableEntry>,
}

impl MixedReport {
    pub fn passes(&self) -> bool {
        self.q_squared.passes() && self.word_order_violations.is_empty() && self.ideal_violations.is_empty()
    }
}

/// Builds D for the geometric subpolygons of Ã. Walls through ∞ must carry no coefficients.
pub fn mixed_differential(
    ic: &InfinityConfig,
    cs: &CoefficientSystem,
    cache: &SecondaryCache,
) -> Result<MixedDifferential, RelativeError> {
    if ic.config.dim() != 2 {
        return Err(RelativeError::Dimension(ic.config.dim()));
    }
    if let Some((&w, _)) = cs.declared().find(|(w, _)| ic.is_infinite(**w)) {
        return Err(RelativeError::CoefficientThroughInfinity(w));
    }
    let generators = full_dimensional_markings(&ic.config, true);
    let tables = build_tables_with(cache, &generators, Variant::Geometric, |s| ic.mixed_order_of(s))?;
    Ok(MixedDifferential { tables, system: cs.clone() })
}

impl MixedDifferential {
    pub fn decorate<'a>(&'a self, ic: &'a InfinityConfig) -> Result<DecoratedTables<'a>, RelativeError> {
        Ok(DecoratedTables::new(&ic.config, &self.system, &self.tables)?)
    }

    /// Partitions the entries; an entry outside the three classes is a closure violation.
    pub fn split(&self, ic: &InfinityConfig) -> (SplitTables, Vec<TableEntry>) {
        let mut split = SplitTables::default();
        let mut violations = Vec::new();
        for (i, e) in self.tables.entries.iter().enumerate() {
            let infinite_inputs = e.inputs.iter().filter(|&&b| ic.is_infinite(b)).count();
            match (ic.is_infinite(e.output), infinite_inputs) {
                (false, 0) => split.finite.push(i),
                (true, n) if n == e.arity() => split.infinite.push(i),
                (true, n) if n > 0 => split.mixed.push(i),
                _ => violations.push(e.clone()),
            }
        }
        (split, violations)
    }

    /// Mixed entries grouped by their number of finite cells.
    pub fn by_finite_count(&self, ic: &InfinityConfig) -> BTreeMap<usize, Vec<usize>> {
        let (split, _) = self.split(ic);
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in split.mixed {
            let e = &self.tables.entries[i];
            let n = e.inputs.iter().filter(|&&b| !ic.is_infinite(b)).count();
            out.entry(n).or_default().push(i);
        }
        out
    }

    /// D² = 0 on every generator, left-to-right words under composition, and both closure
    /// properties.
    pub fn verify(&self, ic: &InfinityConfig) -> Result<MixedReport, RelativeError> {
        let dt = self.decorate(ic)?;
        let q_squared = verify_q_squared(&dt, |cells| ic.mixed_order(cells));
        let (_, ideal_violations) = self.split(ic);
        Ok(MixedReport { q_squared, word_order_violations: self.word_order_violations(ic), ideal_violations })
    }

    /// Substituting a subdivision of an infinite cell in place must keep the infinite cells of
    /// the result in left-to-right order, since T(V∞) is not commutative.
    fn word_order_violations(&self, ic: &InfinityConfig) -> Vec<(PointSet, Vec<PointSet>)> {
        let t = &self.tables;
        let mut out = Vec::new();
        for e in &t.entries {
            for (slot, &x) in e.inputs.iter().enumerate() {
                for inner in t.with_output(x) {
                    let in_place: Vec<PointSet> = e.inputs[..slot]
                        .iter()
                        .chain(&inner.inputs)
                        .chain(&e.inputs[slot + 1..])
                        .copied()
                        .filter(|&b| ic.is_infinite(b))
                        .collect();
                    let canonical: Vec<PointSet> =
                        ic.mixed_order(&in_place).into_iter().filter(|&b| ic.is_infinite(b)).collect();
                    if in_place != canonical {
                        out.push((e.output, in_place));
                    }
                }
            }
        }
        out
    }
}
