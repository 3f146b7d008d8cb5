use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{lcm_of_denominators, make_primitive, Rational};
use super::ExactLaError;

/// Sparse rational matrix stored row-wise. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Rational>>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, row) in dense.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(dense: &[&[i64]]) -> Self {
        let cols = dense.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(dense.len(), cols);
        for (i, row) in dense.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, Rational::from_integer(BigInt::from(v)));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r].get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, Rational> {
        &self.data[r]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of {}x{}", self.rows, self.cols);
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of {}x{}", self.rows, self.cols);
        if v.is_zero() {
            return;
        }
        let slot = self.data[r].entry(c).or_insert_with(Rational::zero);
        *slot += v;
        if slot.is_zero() {
            self.data[r].remove(&c);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(&c, v)| (r, c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            t.data[c].insert(r, v.clone());
        }
        t
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        let mut m = Self::zeros(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            m.set(r, c, v * s);
        }
        m
    }

    pub fn mul(&self, other: &MatrixQ) -> Result<MatrixQ, ExactLaError> {
        if self.cols != other.rows {
            return Err(ExactLaError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (&k, a) in row {
                for (&c, b) in &other.data[k] {
                    *acc.entry(c).or_insert_with(Rational::zero) += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[r] = acc;
        }
        Ok(out)
    }

    pub fn add(&self, other: &MatrixQ) -> Result<MatrixQ, ExactLaError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ExactLaError::Shape(format!("{}x{} plus {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_to(r, c, v);
        }
        Ok(out)
    }

    /// Kronecker product; row (i, k) is i * other.rows + k.
    pub fn kron(&self, other: &MatrixQ) -> MatrixQ {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for (r, c, a) in self.entries() {
            for (s, d, b) in other.entries() {
                out.set(r * other.rows + s, c * other.cols + d, a * b);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.data.iter().map(|row| row.iter().fold(Rational::zero(), |acc, (&c, a)| acc + a * &v[c])).collect()
    }

    /// Exact rank by fraction-free elimination on primitive integer rows.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<BTreeMap<usize, BigInt>> =
            self.data.iter().filter(|r| !r.is_empty()).map(integer_row).collect();
        rows.sort_by_key(|r| (r.len(), r.keys().next().copied()));
        let mut pivots: BTreeMap<usize, BTreeMap<usize, BigInt>> = BTreeMap::new();
        for mut row in rows {
            while let Some((&lead, _)) = row.iter().next() {
                match pivots.get(&lead) {
                    Some(p) => row = eliminate(&row, p, lead),
                    None => {
                        pivots.insert(lead, row);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }

    pub fn rref(&self) -> Rref {
        rref_dense(self.to_dense(), self.cols)
    }

    /// Basis of the right kernel, one vector per free column of the RREF.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let Rref { rows, pivots } = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        (0..self.cols)
            .filter(|c| !pivot_set.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (row, &p) in rows.iter().zip(&pivots) {
                    v[p] = -row[free].clone();
                }
                v
            })
            .collect()
    }
}

fn integer_row(row: &BTreeMap<usize, Rational>) -> BTreeMap<usize, BigInt> {
    let l = lcm_of_denominators(row.values());
    let keys: Vec<usize> = row.keys().copied().collect();
    let ints: Vec<BigInt> = row.values().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect();
    keys.into_iter().zip(make_primitive(ints)).collect()
}

fn eliminate(row: &BTreeMap<usize, BigInt>, pivot: &BTreeMap<usize, BigInt>, lead: usize) -> BTreeMap<usize, BigInt> {
    let a = &row[&lead];
    let p = &pivot[&lead];
    let mut out: BTreeMap<usize, BigInt> = row.iter().map(|(&c, v)| (c, v * p)).collect();
    for (&c, v) in pivot {
        *out.entry(c).or_insert_with(BigInt::zero) -= v * a;
    }
    out.retain(|_, v| !v.is_zero());
    let keys: Vec<usize> = out.keys().copied().collect();
    let vals = make_primitive(out.into_values().collect());
    keys.into_iter().zip(vals).collect()
}

/// Gauss-Jordan elimination with the leftmost-nonzero pivot rule.
pub fn rref_dense(mut m: Vec<Vec<Rational>>, cols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Rref { rows: m, pivots }
}

pub fn rank(m: &MatrixQ) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &MatrixQ) -> Vec<Vec<Rational>> {
    m.kernel_basis()
}

/// Exact determinant of a square rational matrix.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        let (top, below) = a.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in below.iter_mut().take(n - c - 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            for (x, p) in row[c..n].iter_mut().zip(&pivot[c..n]) {
                *x -= &f * p;
            }
        }
    }
    det
}

pub fn determinant_sign(m: &[Vec<Rational>]) -> i8 {
    let d = determinant(m);
    if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    }
}
