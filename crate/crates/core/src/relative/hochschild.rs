use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use crate::exactla::{MatrixQ, Rational};

use super::algebra::TriangularAlgebra;

/// Basis cochain F^{P₀}_{P₁…P_n}: sends the pure tensor of `inputs` to `output`, every other
/// basis tensor to zero. Indices refer to the algebra's basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cochain {
    pub inputs: Vec<usize>,
    pub output: usize,
}

/// Sparse vector over the cochain basis.
pub type CochainVector = BTreeMap<usize, Rational>;

/// C⃗^{≥1}(R, R)[1] over strict chains i₀ < … < i_n, in the bar model: cochains are maps
/// (sR)^{⊗n} → sR and δf = [m', f].
#[derive(Clone, Debug)]
pub struct DirectedHochschild {
    pub cochains: Vec<Cochain>,
    /// Total degree n + t − 1 of each cochain.
    pub degrees: Vec<i32>,
    /// δ of each basis cochain.
    pub differential: Vec<CochainVector>,
    /// δ terms whose target is not a strict-chain cochain.
    pub escaped_terms: usize,
    index: HashMap<Cochain, usize>,
}

pub fn directed_hochschild(r: &TriangularAlgebra) -> DirectedHochschild {
    let cochains = enumerate_cochains(r);
    let index: HashMap<Cochain, usize> = cochains.iter().cloned().enumerate().map(|(k, f)| (f, k)).collect();
    let sdeg = |x: usize| r.elements[x].shifted_degree();
    let degrees: Vec<i32> =
        cochains.iter().map(|f| sdeg(f.output) - f.inputs.iter().map(|&x| sdeg(x)).sum::<i32>()).collect();
    let mut starting_at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut ending_at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, e) in r.elements.iter().enumerate() {
        starting_at.entry(e.left).or_default().push(k);
        ending_at.entry(e.right).or_default().push(k);
    }
    let mut splits: BTreeMap<usize, Vec<(usize, usize, Rational)>> = BTreeMap::new();
    for &(a, b) in r.products.keys() {
        for (c, v) in r.shifted_product(a, b) {
            splits.entry(c).or_default().push((a, b, v));
        }
    }
    let results: Vec<(CochainVector, usize)> = cochains
        .par_iter()
        .zip(&degrees)
        .map(|(f, &deg)| {
            let mut out = CochainVector::new();
            let mut escaped = 0;
            let mut add = |g: Cochain, v: Rational| match index.get(&g) {
                Some(&k) => *out.entry(k).or_insert_with(Rational::zero) += v,
                None => escaped += 1,
            };
            let o = &r.elements[f.output];
            // m'(f(x), y)
            for &y in starting_at.get(&o.right).into_iter().flatten() {
                for (z, v) in r.shifted_product(f.output, y) {
                    let mut inputs = f.inputs.clone();
                    inputs.push(y);
                    add(Cochain { inputs, output: z }, v);
                }
            }
            // (−1)^{|f||y|} m'(y, f(x))
            for &y in ending_at.get(&o.left).into_iter().flatten() {
                let odd = (deg * sdeg(y)).rem_euclid(2) == 1;
                for (z, v) in r.shifted_product(y, f.output) {
                    let mut inputs = vec![y];
                    inputs.extend_from_slice(&f.inputs);
                    add(Cochain { inputs, output: z }, if odd { -v } else { v });
                }
            }
            // −(−1)^{|f|} Σ (−1)^{|x₁|+…+|x_i|} f(…, m'(a, b), …)
            let mut prefix = 0;
            for (i, &x) in f.inputs.iter().enumerate() {
                let odd = (deg + prefix).rem_euclid(2) == 0;
                for (a, b, v) in splits.get(&x).into_iter().flatten() {
                    let mut inputs = f.inputs[..i].to_vec();
                    inputs.extend([*a, *b]);
                    inputs.extend_from_slice(&f.inputs[i + 1..]);
                    add(Cochain { inputs, output: f.output }, if odd { -v.clone() } else { v.clone() });
                }
                prefix += sdeg(x);
            }
            out.retain(|_, v| !v.is_zero());
            (out, escaped)
        })
        .collect();
    let escaped_terms = results.iter().map(|r| r.1).sum();
    let differential = results.into_iter().map(|r| r.0).collect();
    DirectedHochschild { cochains, degrees, differential, escaped_terms, index }
}

/// Cochains over every strict chain of nonzero blocks, n ≥ 1.
fn enumerate_cochains(r: &TriangularAlgebra) -> Vec<Cochain> {
    let mut starting_at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut block: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (k, e) in r.elements.iter().enumerate() {
        starting_at.entry(e.left).or_default().push(k);
        block.entry((e.left, e.right)).or_default().push(k);
    }
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = r.elements.iter().enumerate().map(|(k, _)| vec![k]).collect();
    while let Some(word) = stack.pop() {
        let first = r.elements[word[0]].left;
        let last = r.elements[*word.last().expect("nonempty")].right;
        for &o in block.get(&(first, last)).into_iter().flatten() {
            out.push(Cochain { inputs: word.clone(), output: o });
        }
        for &y in starting_at.get(&last).into_iter().flatten() {
            let mut w = word.clone();
            w.push(y);
            stack.push(w);
        }
    }
    out.sort();
    out
}

impl DirectedHochschild {
    pub fn len(&self) -> usize {
        self.cochains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cochains.is_empty()
    }

    pub fn index_of(&self, f: &Cochain) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Cochain indices per total degree.
    pub fn by_degree(&self) -> BTreeMap<i32, Vec<usize>> {
        let mut out: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (k, &d) in self.degrees.iter().enumerate() {
            out.entry(d).or_default().push(k);
        }
        out
    }

    pub fn apply(&self, v: &CochainVector) -> CochainVector {
        let mut out = CochainVector::new();
        for (&k, a) in v {
            for (&j, b) in &self.differential[k] {
                *out.entry(j).or_insert_with(Rational::zero) += a * b;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Basis cochains with δ(δ f) ≠ 0.
    pub fn d_squared_failures(&self) -> Vec<usize> {
        (0..self.len()).into_par_iter().filter(|&k| !self.apply(&self.differential[k]).is_empty()).collect()
    }

    /// δ raises the total degree by one on every term.
    pub fn degree_violations(&self) -> usize {
        self.differential
            .iter()
            .enumerate()
            .map(|(k, v)| v.keys().filter(|&&j| self.degrees[j] != self.degrees[k] + 1).count())
            .sum()
    }

    /// Betti numbers of the whole complex.
    pub fn betti(&self) -> BTreeMap<i32, usize> {
        self.sub_betti(|_| true)
    }

    /// Cohomology of the subquotient spanned by the cochains selected by `keep`, with δ
    /// followed by the projection onto them; a subcomplex or quotient when δ respects `keep`.
    pub fn sub_betti(&self, keep: impl Fn(usize) -> bool + Sync) -> BTreeMap<i32, usize> {
        let by_degree: BTreeMap<i32, Vec<usize>> =
            self.by_degree().into_iter().map(|(d, v)| (d, v.into_iter().filter(|&k| keep(k)).collect())).collect();
        let ranks: BTreeMap<i32, usize> = by_degree
            .par_iter()
            .map(|(&d, basis)| {
                let rows: Vec<CochainVector> = basis
                    .iter()
                    .map(|&k| {
                        self.differential[k].iter().filter(|(&j, _)| keep(j)).map(|(&j, v)| (j, v.clone())).collect()
                    })
                    .collect();
                (d, rank_of(&rows, self.len()))
            })
            .collect();
        by_degree
            .iter()
            .map(|(&d, basis)| {
                let incoming = ranks.get(&(d - 1)).copied().unwrap_or(0);
                (d, basis.len() - ranks[&d] - incoming)
            })
            .filter(|&(_, b)| b > 0)
            .collect()
    }

    /// Coboundaries of degree `d`: δ of every cochain of degree d − 1 selected by `keep`,
    /// projected onto the selection.
    pub fn coboundaries(&self, d: i32, keep: impl Fn(usize) -> bool) -> Vec<CochainVector> {
        (0..self.len())
            .filter(|&k| self.degrees[k] == d - 1 && keep(k))
            .map(|k| self.differential[k].iter().filter(|(&j, _)| keep(j)).map(|(&j, v)| (j, v.clone())).collect())
            .collect()
    }
}

/// Rank of a family of sparse vectors.
pub fn rank_of(rows: &[CochainVector], cols: usize) -> usize {
    let mut m = MatrixQ::zeros(rows.len(), cols);
    for (r, row) in rows.iter().enumerate() {
        for (&c, v) in row {
            m.set(r, c, v.clone());
        }
    }
    m.rank()
}
