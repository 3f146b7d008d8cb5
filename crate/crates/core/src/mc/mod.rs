//! Maurer–Cartan analysis: binomial circuit equations, the cocycle lattice, direct evaluation
//! of the MC series against the structure tables, and polytope weights.

mod evaluate;
mod lattice;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::exactla::Rational;
use crate::geometry::{enumerate_circuits_in, Circuit, Config, PointSet};
use crate::linfty::LinftyError;

pub use evaluate::{affine_gauge, is_mc, perturb, polytope_weight, random_mc_element, McVerdict};
pub use lattice::{area_exponents, cocycle_lattice, CocycleLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum McModel {
    /// γ_σ, all nonzero.
    Multiplicative,
    /// β_σ with γ_σ = e^β_σ.
    Additive,
}

/// A degree-one element: one value per d-simplex of the configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McElement {
    pub model: McModel,
    pub values: BTreeMap<PointSet, Rational>,
}

impl McElement {
    /// Constant element on every d-simplex.
    pub fn constant(c: &Config, model: McModel, value: Rational) -> Self {
        McElement { model, values: simplices(c).into_iter().map(|s| (s, value.clone())).collect() }
    }

    pub fn get(&self, s: PointSet) -> &Rational {
        &self.values[&s]
    }
}

/// T₊ = {Z ∖ z : z ∈ Z₋} on the left, T₋ = {Z ∖ z : z ∈ Z₊} on the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialEquation {
    pub circuit: Circuit,
    pub left: Vec<PointSet>,
    pub right: Vec<PointSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialSystem {
    /// The d-simplices, indexing exponent vectors.
    pub simplices: Vec<PointSet>,
    pub equations: Vec<BinomialEquation>,
}

impl BinomialSystem {
    /// Each equation as its two 0/1 exponent vectors over `simplices`.
    pub fn exponent_vectors(&self) -> Vec<(Vec<u8>, Vec<u8>)> {
        let vec_of = |side: &[PointSet]| self.simplices.iter().map(|s| side.contains(s) as u8).collect();
        self.equations.iter().map(|e| (vec_of(&e.left), vec_of(&e.right))).collect()
    }
}

/// Finite d-simplices of the configuration, sorted.
pub fn simplices(c: &Config) -> Vec<PointSet> {
    c.finite().subsets_of_size(c.dim() + 1)
}

pub fn circuit_equations(c: &Config) -> BinomialSystem {
    let equations = enumerate_circuits_in(c, c.finite())
        .into_iter()
        .map(|z| {
            let mut left = z.positive_triangulation();
            let mut right = z.negative_triangulation();
            left.sort();
            right.sort();
            BinomialEquation { circuit: z, left, right }
        })
        .collect();
    BinomialSystem { simplices: simplices(c), equations }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McError {
    #[error("element is not Maurer–Cartan")]
    NotMc,
    #[error("element misses simplex {0:?} or has a zero value there")]
    Incomplete(PointSet),
    #[error("direct evaluation and binomial check disagree on circuit {0:?}")]
    Disagreement(PointSet),
    #[error("weight differs between triangulations of {0:?}")]
    WeightMismatch(PointSet),
    #[error(transparent)]
    Linfty(#[from] LinftyError),
}
