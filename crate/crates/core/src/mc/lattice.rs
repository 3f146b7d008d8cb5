use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{circuit_equations, BinomialSystem, McElement, McModel};
use crate::exactla::{int, integer_kernel_basis, rank, MatrixQ, Rational};
use crate::geometry::Config;

/// ℨ_d: integer d-chains whose sums over T₊ and T₋ agree on every circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleLattice {
    pub system: BinomialSystem,
    /// Rows: circuits; columns: simplices; +1 on T₊, −1 on T₋.
    pub matrix: Vec<Vec<BigInt>>,
    pub basis: Vec<Vec<BigInt>>,
    pub matrix_rank: usize,
}

impl CocycleLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, beta: &[BigInt]) -> bool {
        self.matrix.iter().all(|row| row.iter().zip(beta).fold(BigInt::zero(), |acc, (a, b)| acc + a * b).is_zero())
    }

    /// Membership in Γ_A = ℨ_d ∩ ℤ₊^𝔖.
    pub fn in_semigroup(&self, beta: &[BigInt]) -> bool {
        beta.iter().all(|b| !b.is_negative()) && self.contains(beta)
    }

    /// Additive cocycle test over ℚ.
    pub fn is_additive_cocycle(&self, beta: &McElement) -> bool {
        self.matrix.iter().all(|row| {
            row.iter()
                .zip(&self.system.simplices)
                .fold(Rational::zero(), |acc, (a, s)| acc + Rational::from_integer(a.clone()) * beta.get(*s))
                .is_zero()
        })
    }
}

pub fn cocycle_lattice(c: &Config) -> CocycleLattice {
    let system = circuit_equations(c);
    let n = system.simplices.len();
    let matrix: Vec<Vec<BigInt>> = system
        .equations
        .iter()
        .map(|e| {
            system
                .simplices
                .iter()
                .map(|s| {
                    if e.left.contains(s) {
                        BigInt::from(1)
                    } else if e.right.contains(s) {
                        BigInt::from(-1)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let basis = integer_kernel_basis(&matrix, n);
    let q = MatrixQ::from_dense(
        matrix.len(),
        n,
        &matrix.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect::<Vec<_>>(),
    );
    let matrix_rank = rank(&q);
    CocycleLattice { system, matrix, basis, matrix_rank }
}

/// β_σ = Area(σ) (Lebesgue volume in general d).
pub fn area_exponents(c: &Config) -> McElement {
    let values = super::simplices(c)
        .into_iter()
        .map(|s| (s, c.simplex(s).map(|i| i.volume.clone()).unwrap_or_else(|| int(0))))
        .collect();
    McElement { model: McModel::Additive, values }
}
