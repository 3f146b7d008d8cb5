use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use super::block::{polytope_block, TensorBlock};
use super::contract::{subdivision_contraction, Contraction};
use super::space::{koszul_odd, CoefficientSystem};
use super::CoeffError;
use crate::exactla::{MatrixQ, Rational};
use crate::geometry::{Config, PointSet};
use crate::linfty::StructureTables;

/// Structure tables with a coefficient system attached: the entry (A', 𝒫) becomes the map
/// w_1 ⊗ … ⊗ w_n ↦ κ · c · γ_𝒫(n_1 ⊗ … ⊗ n_n) on W_B = or(Σ(B)) ⊗ N_B, where κ is the sign of
/// moving each orientation line past the coefficient factors before it.
pub struct DecoratedTables<'a> {
    pub config: &'a Config,
    pub system: &'a CoefficientSystem,
    pub tables: &'a StructureTables,
    blocks: HashMap<PointSet, TensorBlock>,
    /// Basis degrees of each block.
    degrees: HashMap<PointSet, Vec<i32>>,
    contractions: Vec<Contraction>,
}

impl<'a> DecoratedTables<'a> {
    pub fn new(c: &'a Config, cs: &'a CoefficientSystem, tables: &'a StructureTables) -> Result<Self, CoeffError> {
        let contractions = tables
            .entries
            .par_iter()
            .map(|e| subdivision_contraction(c, cs, &e.inputs, e.output))
            .collect::<Result<Vec<_>, _>>()?;
        let blocks: HashMap<PointSet, TensorBlock> =
            tables.generators.iter().map(|g| (g.marking, polytope_block(c, cs, g.marking))).collect();
        let degrees =
            blocks.iter().map(|(&b, block)| (b, (0..block.dim()).map(|i| block.degree(i)).collect())).collect();
        Ok(DecoratedTables { config: c, system: cs, tables, blocks, degrees, contractions })
    }

    pub fn block(&self, b: PointSet) -> &TensorBlock {
        &self.blocks[&b]
    }

    fn dim_sigma(&self, b: PointSet) -> i32 {
        self.tables.generator(b).expect("generator").dim as i32
    }

    /// Total degree of o_B ⊗ n_b.
    pub fn degree(&self, b: PointSet, index: usize) -> i32 {
        self.dim_sigma(b) + self.degrees[&b][index]
    }

    /// Image of the basis inputs (one index per cell, in entry order) under entry `i`.
    pub fn apply_entry(&self, i: usize, inputs: &[usize]) -> Option<(usize, Rational)> {
        let e = &self.tables.entries[i];
        let mut tuple = Vec::new();
        let mut kappa_odd = false;
        let mut deg_before = 0;
        for (&b, &x) in e.inputs.iter().zip(inputs) {
            let block = self.block(b);
            if (self.dim_sigma(b) * deg_before).rem_euclid(2) == 1 {
                kappa_odd = !kappa_odd;
            }
            deg_before += block.degree(x);
            tuple.extend(block.tuple(x));
        }
        let (out, v) = self.contractions[i].apply(self.system, &tuple)?;
        let v = v * &e.coefficient;
        Some((out, if kappa_odd { -v } else { v }))
    }

    /// The entry as a matrix from the tensor product of the input blocks to the output block.
    pub fn entry_matrix(&self, i: usize) -> MatrixQ {
        let e = &self.tables.entries[i];
        let blocks: Vec<&TensorBlock> = e.inputs.iter().map(|&b| self.block(b)).collect();
        let product = TensorBlock::product(blocks.iter().copied());
        let mut m = MatrixQ::zeros(self.block(e.output).dim(), product.dim());
        for col in 0..product.dim() {
            let indices = split_index(&blocks, col);
            if let Some((row, v)) = self.apply_entry(i, &indices) {
                m.set(row, col, v);
            }
        }
        m
    }
}

/// Per-block indices of a basis element of a tensor product of blocks.
fn split_index(blocks: &[&TensorBlock], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; blocks.len()];
    for (slot, b) in out.iter_mut().zip(blocks).rev() {
        *slot = index % b.dim();
        index /= b.dim();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSquaredFailure {
    pub output: PointSet,
    pub inputs: Vec<PointSet>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QSquaredReport {
    /// Distinct (output, input multiset) pairs reached by a composite of two entries.
    pub groups_checked: usize,
    pub basis_evaluations: usize,
    pub failures: Vec<QSquaredFailure>,
}

impl QSquaredReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A composite Q_𝒫(…, Q_𝒫′(…), …): outer entry, slot replaced, inner entry.
#[derive(Clone, Copy)]
struct Composite {
    outer: usize,
    slot: usize,
    inner: usize,
}

/// Checks Q ∘ Q = 0 on every basis element of every input multiset reached by composing two
/// entries. `canonical` fixes the order of the inputs of a composite, as the tables do for
/// single entries.
pub fn verify_q_squared<F>(dt: &DecoratedTables, canonical: F) -> QSquaredReport
where
    F: Fn(&[PointSet]) -> Vec<PointSet> + Sync,
{
    let t = dt.tables;
    let mut groups: BTreeMap<(PointSet, Vec<PointSet>), Vec<Composite>> = BTreeMap::new();
    for (outer, e) in t.entries.iter().enumerate() {
        for (slot, &x) in e.inputs.iter().enumerate() {
            for inner in t.with_output(x).map(|f| entry_index(t, f)) {
                let mut cells: Vec<PointSet> = e.inputs.iter().copied().filter(|&b| b != x).collect();
                cells.extend_from_slice(&t.entries[inner].inputs);
                groups.entry((e.output, canonical(&cells))).or_default().push(Composite { outer, slot, inner });
            }
        }
    }
    let results: Vec<(usize, Option<QSquaredFailure>)> = groups
        .par_iter()
        .map(|((output, cells), terms)| {
            let (evaluations, ok) = check_group(dt, cells, terms);
            (evaluations, (!ok).then(|| QSquaredFailure { output: *output, inputs: cells.clone() }))
        })
        .collect();
    QSquaredReport {
        groups_checked: results.len(),
        basis_evaluations: results.iter().map(|r| r.0).sum(),
        failures: results.into_iter().filter_map(|r| r.1).collect(),
    }
}

fn entry_index(t: &StructureTables, e: &crate::linfty::TableEntry) -> usize {
    t.entries.binary_search(e).expect("entry of the table")
}

fn check_group(dt: &DecoratedTables, cells: &[PointSet], terms: &[Composite]) -> (usize, bool) {
    let t = dt.tables;
    let blocks: Vec<&TensorBlock> = cells.iter().map(|&b| dt.block(b)).collect();
    let position = |b: PointSet| cells.iter().position(|&z| z == b).expect("cell of the composite");
    // in-place orders: outer inputs with the replaced slot expanded
    let layouts: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> = terms
        .iter()
        .map(|term| {
            let outer = &t.entries[term.outer].inputs;
            let inner: Vec<usize> = t.entries[term.inner].inputs.iter().map(|&b| position(b)).collect();
            let before: Vec<usize> = outer[..term.slot].iter().map(|&b| position(b)).collect();
            let after: Vec<usize> = outer[term.slot + 1..].iter().map(|&b| position(b)).collect();
            (before, inner, after)
        })
        .collect();
    let candidates = surviving_tuples(dt, &blocks);
    let total = candidates.len();
    for (index, basis) in candidates.into_iter().enumerate() {
        let degrees: Vec<i32> = cells.iter().zip(&basis).map(|(&b, &x)| dt.degree(b, x)).collect();
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (term, (before, inner, after)) in terms.iter().zip(&layouts) {
            let inner_inputs: Vec<usize> = inner.iter().map(|&p| basis[p]).collect();
            let Some((mid, v_inner)) = dt.apply_entry(term.inner, &inner_inputs) else {
                continue;
            };
            let outer_inputs: Vec<usize> =
                before.iter().map(|&p| basis[p]).chain([mid]).chain(after.iter().map(|&p| basis[p])).collect();
            let Some((out, v_outer)) = dt.apply_entry(term.outer, &outer_inputs) else {
                continue;
            };
            let perm: Vec<usize> = before.iter().chain(inner).chain(after).copied().collect();
            let mut v = v_inner * v_outer;
            let odd_before = before.iter().map(|&p| degrees[p]).sum::<i32>().rem_euclid(2) == 1;
            if odd_before != koszul_odd(&degrees, &perm) {
                v = -v;
            }
            *acc.entry(out).or_insert_with(Rational::zero) += v;
        }
        if acc.values().any(|v| !v.is_zero()) {
            return (index + 1, false);
        }
    }
    (total, true)
}

/// Basis tuples (one index per cell) on which every internal pairing of the composite is
/// nonzero. Each composite term contracts all internal walls, so every other tuple maps to zero.
fn surviving_tuples(dt: &DecoratedTables, blocks: &[&TensorBlock]) -> Vec<Vec<usize>> {
    let cs = dt.system;
    let flat: Vec<(usize, usize)> =
        blocks.iter().enumerate().flat_map(|(c, b)| (0..b.walls.len()).map(move |k| (c, k))).collect();
    let wall = |(c, k): (usize, usize)| blocks[c].walls[k];
    // per flat factor: the choices, as (own index, partner flat slot and index)
    let mut partner: Vec<Option<usize>> = vec![None; flat.len()];
    for a in 0..flat.len() {
        if partner[a].is_none() {
            if let Some(b) =
                (a + 1..flat.len()).find(|&b| partner[b].is_none() && wall(flat[b]) == wall(flat[a]).opposite())
            {
                partner[a] = Some(b);
                partner[b] = Some(a);
            }
        }
    }
    // options per free slot: a list of assignments to one or two factors
    let mut slots: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
    for a in 0..flat.len() {
        let (c, k) = flat[a];
        let n = blocks[c].factors[k].len();
        match partner[a] {
            None => slots.push((0..n).map(|x| vec![(a, x)]).collect()),
            Some(b) if b > a => {
                let (cb, kb) = flat[b];
                let m = blocks[cb].factors[kb].len();
                let w = wall(flat[a]);
                let options = (0..n)
                    .flat_map(|x| (0..m).map(move |y| (x, y)))
                    .filter(|&(x, y)| !cs.pair(w, x, y).is_zero())
                    .map(|(x, y)| vec![(a, x), (b, y)])
                    .collect();
                slots.push(options);
            }
            Some(_) => {}
        }
    }
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.walls.len();
            Some(o)
        })
        .collect();
    let mut out = Vec::new();
    let mut factor_values = vec![0usize; flat.len()];
    let mut choice = vec![0usize; slots.len()];
    if slots.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        for (slot, &ch) in slots.iter().zip(&choice) {
            for &(f, x) in &slot[ch] {
                factor_values[f] = x;
            }
        }
        out.push(blocks.iter().zip(&offsets).map(|(b, &o)| b.index(&factor_values[o..o + b.walls.len()])).collect());
        let mut i = slots.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < slots[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}
