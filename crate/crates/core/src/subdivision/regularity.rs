use num_traits::{One, Zero};

use super::lifting::interpolate;
use super::{validate, Subdivision, SubdivisionError};
use crate::exactla::{lp_strict_feasible, LinearConstraint, LpOutcome, MatrixQ, Rational};
use crate::geometry::{Config, PointSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularity {
    /// Lifting indexed by configuration point.
    Regular(Vec<Rational>),
    NotRegular,
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular(_))
    }
}

/// Affine basis of a cell: its first d+1 points (any d+1 are independent in general position).
fn basis_of(c: &Config, cell: PointSet) -> PointSet {
    cell.iter().take(c.dim() + 1).collect()
}

/// Row `e_q - Σ β_i e_{b_i}` over the parent's variable positions.
fn deviation_row(c: &Config, parent: PointSet, basis: PointSet, q: usize) -> Vec<Rational> {
    let pos = |p: usize| parent.iter().position(|x| x == p).expect("point in parent");
    let mut row = vec![Rational::zero(); parent.len()];
    row[pos(q)] += Rational::one();
    for (b, v) in c.barycentric(basis, q).iter().zip(basis.iter()) {
        row[pos(v)] -= b;
    }
    row
}

fn equality_rows(c: &Config, s: &Subdivision) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for &cell in s.cells() {
        let basis = basis_of(c, cell);
        for q in cell.difference(basis).iter() {
            rows.push(deviation_row(c, s.parent, basis, q));
        }
    }
    rows
}

/// Regularity through the folding system: affine on every cell, strictly above each cell's
/// affine piece at every other marked point.
pub fn is_regular(c: &Config, s: &Subdivision) -> Result<Regularity, SubdivisionError> {
    validate(c, s)?;
    if let Some(psi) = &s.certificate {
        if certifies(c, s, psi) {
            return Ok(Regularity::Regular(psi.clone()));
        }
    }
    let m = s.parent.len();
    let equalities: Vec<LinearConstraint> =
        equality_rows(c, s).into_iter().map(|r| LinearConstraint::new(r, Rational::zero())).collect();
    let mut strict = Vec::new();
    for &cell in s.cells() {
        let basis = basis_of(c, cell);
        for q in s.parent.difference(cell).iter() {
            strict.push(LinearConstraint::new(deviation_row(c, s.parent, basis, q), Rational::zero()));
        }
    }
    match lp_strict_feasible(m, &equalities, &strict)? {
        LpOutcome::Infeasible => Ok(Regularity::NotRegular),
        LpOutcome::Feasible(w) => {
            let mut psi = vec![Rational::zero(); c.len()];
            for (v, q) in w.into_iter().zip(s.parent.iter()) {
                psi[q] = v;
            }
            debug_assert!(certifies(c, s, &psi));
            Ok(Regularity::Regular(psi))
        }
    }
}

/// Whether `psi` induces exactly the cells of `s`.
pub fn certifies(c: &Config, s: &Subdivision, psi: &[Rational]) -> bool {
    s.cells().iter().all(|&cell| {
        let basis = basis_of(c, cell);
        s.parent.difference(basis).iter().all(|q| {
            let gap = &psi[q] - interpolate(c, basis, q, psi);
            if cell.contains(q) {
                gap.is_zero()
            } else {
                gap > Rational::zero()
            }
        })
    })
}

/// Dimension of the space of liftings affine on each cell (unmarked points free).
pub fn pw_affine_dim(c: &Config, s: &Subdivision) -> usize {
    let rows = equality_rows(c, s);
    let m = s.parent.len();
    if rows.is_empty() {
        return m;
    }
    m - MatrixQ::from_dense(rows.len(), m, &rows).rank()
}

/// `pw_affine_dim` minus the global affine functions.
pub fn reduced_dim(c: &Config, s: &Subdivision) -> usize {
    pw_affine_dim(c, s) - (c.dim() + 1)
}

/// Regular with a one-dimensional reduced normal cone; the trivial subdivision is never coarse.
pub fn is_coarse(c: &Config, s: &Subdivision) -> Result<bool, SubdivisionError> {
    if s.is_trivial() {
        return Ok(false);
    }
    Ok(reduced_dim(c, s) == 1 && is_regular(c, s)?.is_regular())
}

/// Every fine cell's marking lies in some coarse cell's marking.
pub fn refines(fine: &Subdivision, coarse: &Subdivision) -> bool {
    fine.parent == coarse.parent && fine.cells().iter().all(|&f| coarse.cells().iter().any(|&g| f.is_subset(g)))
}
