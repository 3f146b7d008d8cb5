use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::config::Config;
use super::pointset::PointSet;
use crate::exactla::{primitive_integer, MatrixQ, Rational};

/// Minimal affinely dependent set of d+2 points with its Radon split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub support: PointSet,
    pub positive: PointSet,
    pub negative: PointSet,
    /// Primitive integer affine dependency indexed like `support.iter()`; positive on `positive`.
    pub dependency: Vec<BigInt>,
}

impl Circuit {
    /// Simplices `Z ∖ {z}` for `z` in the negative part.
    pub fn positive_triangulation(&self) -> Vec<PointSet> {
        self.negative.iter().map(|z| self.support.without(z)).collect()
    }

    /// Simplices `Z ∖ {z}` for `z` in the positive part.
    pub fn negative_triangulation(&self) -> Vec<PointSet> {
        self.positive.iter().map(|z| self.support.without(z)).collect()
    }
}

/// The circuit on a (d+2)-subset. The positive part is the larger side; on a tie, the side
/// holding the lowest index.
pub fn circuit_of(c: &Config, support: PointSet) -> Circuit {
    let d = c.dim();
    assert_eq!(support.len(), d + 2, "circuits have d+2 points");
    let idx = support.to_vec();
    let mut m = MatrixQ::zeros(d + 1, d + 2);
    for (col, &i) in idx.iter().enumerate() {
        m.set(0, col, Rational::one());
        for k in 0..d {
            m.set(k + 1, col, c.coords(i)[k].clone());
        }
    }
    let kernel = m.kernel_basis();
    assert_eq!(kernel.len(), 1, "general position gives a unique dependency");
    let mut dep = primitive_integer(&kernel[0]);
    let pos_count = dep.iter().filter(|x| x.is_positive()).count();
    let neg_count = dep.iter().filter(|x| x.is_negative()).count();
    let flip = neg_count > pos_count || (neg_count == pos_count && dep[0].is_negative());
    if flip {
        dep.iter_mut().for_each(|x| *x = -x.clone());
    }
    let positive = idx.iter().zip(&dep).filter(|(_, x)| x.is_positive()).map(|(&i, _)| i).collect();
    let negative = idx.iter().zip(&dep).filter(|(_, x)| x.is_negative()).map(|(&i, _)| i).collect();
    Circuit { support, positive, negative, dependency: dep }
}

/// One circuit per (d+2)-subset of `within`, in lexicographic order of supports.
pub fn enumerate_circuits_in(c: &Config, within: PointSet) -> Vec<Circuit> {
    within.subsets_of_size(c.dim() + 2).into_iter().map(|z| circuit_of(c, z)).collect()
}

pub fn enumerate_circuits(c: &Config) -> Vec<Circuit> {
    enumerate_circuits_in(c, c.all())
}
