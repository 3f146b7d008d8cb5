use std::collections::BTreeMap;

use rayon::prelude::*;

use super::matrix::{rref_dense, MatrixQ};
use super::rational::Rational;
use super::ExactLaError;

/// Cochain complex over Q. `differentials[k]` maps degree `k` to degree `k + 1`
/// (rows indexed by the degree `k + 1` basis, columns by the degree `k` basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexQ {
    basis: BTreeMap<i32, Vec<String>>,
    differentials: BTreeMap<i32, MatrixQ>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub betti: BTreeMap<i32, usize>,
    pub representatives: BTreeMap<i32, Vec<Vec<Rational>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub source_betti: BTreeMap<i32, usize>,
    pub target_betti: BTreeMap<i32, usize>,
    /// Cohomology of the mapping cone, indexed by the source degree.
    pub cone_betti: BTreeMap<i32, usize>,
    pub is_quasi_iso: bool,
}

impl ChainComplexQ {
    /// Validates shapes and `d ∘ d = 0`.
    pub fn new(basis: BTreeMap<i32, Vec<String>>, differentials: BTreeMap<i32, MatrixQ>) -> Result<Self, ExactLaError> {
        let c = ChainComplexQ::new_unchecked(basis, differentials)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// Validates shapes only.
    pub fn new_unchecked(
        basis: BTreeMap<i32, Vec<String>>,
        mut differentials: BTreeMap<i32, MatrixQ>,
    ) -> Result<Self, ExactLaError> {
        let dim = |k: i32| basis.get(&k).map_or(0, Vec::len);
        for (&k, d) in &differentials {
            if d.cols() != dim(k) || d.rows() != dim(k + 1) {
                return Err(ExactLaError::Shape(format!(
                    "differential at degree {k} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dim(k + 1),
                    dim(k)
                )));
            }
        }
        differentials.retain(|_, d| !d.is_zero());
        Ok(ChainComplexQ { basis, differentials })
    }

    pub fn check_square_zero(&self) -> Result<(), ExactLaError> {
        for (&k, d) in &self.differentials {
            if let Some(next) = self.differentials.get(&(k + 1)) {
                if !next.mul(d)?.is_zero() {
                    return Err(ExactLaError::NotComplex(k));
                }
            }
        }
        Ok(())
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.basis.iter().filter(|(_, b)| !b.is_empty()).map(|(&k, _)| k).collect()
    }

    pub fn dim(&self, k: i32) -> usize {
        self.basis.get(&k).map_or(0, Vec::len)
    }

    pub fn basis_labels(&self, k: i32) -> &[String] {
        self.basis.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn differential(&self, k: i32) -> MatrixQ {
        self.differentials.get(&k).cloned().unwrap_or_else(|| MatrixQ::zeros(self.dim(k + 1), self.dim(k)))
    }

    fn ranks(&self) -> BTreeMap<i32, usize> {
        let pairs: Vec<(i32, &MatrixQ)> = self.differentials.iter().map(|(&k, d)| (k, d)).collect();
        pairs.into_par_iter().map(|(k, d)| (k, d.rank())).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.basis.iter().map(|(&k, b)| if k.rem_euclid(2) == 0 { b.len() as i64 } else { -(b.len() as i64) }).sum()
    }

    /// Betti numbers only; skips representative computation.
    pub fn betti_numbers(&self) -> BTreeMap<i32, usize> {
        let ranks = self.ranks();
        let r = |k: i32| ranks.get(&k).copied().unwrap_or(0);
        self.degrees().into_iter().map(|k| (k, self.dim(k) - r(k) - r(k - 1))).collect()
    }
}

/// Betti numbers and cocycle representatives spanning a complement of the coboundaries.
pub fn cohomology(c: &ChainComplexQ) -> Result<CohomologyReport, ExactLaError> {
    c.check_square_zero()?;
    let mut betti = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    for k in c.degrees() {
        let cocycles = c.differential(k).kernel_basis();
        let boundary = c.differential(k - 1);
        // columns of the incoming differential span the coboundaries
        let mut span: Vec<Vec<Rational>> = boundary.transpose().to_dense();
        let base_rank = rref_dense(span.clone(), c.dim(k)).pivots.len();
        let mut reps = Vec::new();
        let mut current = base_rank;
        for z in cocycles {
            span.push(z.clone());
            let r = rref_dense(span.clone(), c.dim(k)).pivots.len();
            if r > current {
                current = r;
                reps.push(z);
            } else {
                span.pop();
            }
        }
        betti.insert(k, reps.len());
        representatives.insert(k, reps);
    }
    Ok(CohomologyReport { betti, representatives })
}

/// Decides whether `f` induces an isomorphism on cohomology by testing acyclicity of its cone.
/// `f[k]` maps source degree `k` to target degree `k`.
pub fn is_quasi_iso(
    f: &BTreeMap<i32, MatrixQ>,
    source: &ChainComplexQ,
    target: &ChainComplexQ,
) -> Result<QuasiIsoReport, ExactLaError> {
    let fk = |k: i32| f.get(&k).cloned().unwrap_or_else(|| MatrixQ::zeros(target.dim(k), source.dim(k)));
    let mut all: Vec<i32> = source.degrees();
    all.extend(target.degrees());
    all.extend(f.keys().copied());
    all.sort_unstable();
    all.dedup();
    for &k in &all {
        let m = fk(k);
        if m.rows() != target.dim(k) || m.cols() != source.dim(k) {
            return Err(ExactLaError::Shape(format!("map at degree {k} has wrong shape")));
        }
    }
    for &k in &all {
        let lhs = fk(k + 1).mul(&source.differential(k))?;
        let rhs = target.differential(k).mul(&fk(k))?;
        if lhs != rhs {
            return Err(ExactLaError::NotChainMap(k));
        }
    }

    // cone^k = source^{k+1} ⊕ target^k, d(s, t) = (-d s, f s + d t)
    let lo = all.first().copied().unwrap_or(0) - 1;
    let hi = all.last().copied().unwrap_or(0) + 1;
    let mut basis = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for k in lo..=hi {
        let mut labels: Vec<String> = source.basis_labels(k + 1).iter().map(|l| format!("s:{l}")).collect();
        labels.extend(target.basis_labels(k).iter().map(|l| format!("t:{l}")));
        basis.insert(k, labels);
    }
    for k in lo..hi {
        let (s1, t0) = (source.dim(k + 1), target.dim(k));
        let (s2, t1) = (source.dim(k + 2), target.dim(k + 1));
        let mut m = MatrixQ::zeros(s2 + t1, s1 + t0);
        for (r, c, v) in source.differential(k + 1).entries() {
            m.set(r, c, -v.clone());
        }
        for (r, c, v) in fk(k + 1).entries() {
            m.set(s2 + r, c, v.clone());
        }
        for (r, c, v) in target.differential(k).entries() {
            m.set(s2 + r, s1 + c, v.clone());
        }
        diffs.insert(k, m);
    }
    let cone = ChainComplexQ::new_unchecked(basis, diffs)?;
    let (source_betti, (target_betti, cone_betti)) = rayon::join(
        || source.betti_numbers(),
        || rayon::join(|| target.betti_numbers(), || shift_back(cone.betti_numbers())),
    );
    let is_quasi_iso = cone_betti.values().all(|&b| b == 0);
    Ok(QuasiIsoReport { source_betti, target_betti, cone_betti, is_quasi_iso })
}

fn shift_back(b: BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    b.into_iter().map(|(k, v)| (k + 1, v)).collect()
}
