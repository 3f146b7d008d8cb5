use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::coeff::DecoratedTables;
use crate::exactla::Rational;
use crate::geometry::{PointConfig, PointSet};

use super::infinity::InfinityConfig;
use super::mixed::MixedDifferential;
use super::RelativeError;

/// Basis element of a block R_ij.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisElement {
    pub left: usize,
    pub right: usize,
    /// The infinite polygon (d = 2) or the endpoint pair (d = 1).
    pub cell: PointSet,
    /// Index in the coefficient block of the cell.
    pub index: usize,
    /// Degree of F: 1 + dim Σ plus the coefficient degree.
    pub degree: i32,
}

impl BasisElement {
    /// Degree in sR.
    pub fn shifted_degree(&self) -> i32 {
        self.degree - 1
    }
}

/// A triangular graded algebra: units R_ii = 𝐤 per label and strict blocks R_ij, i < j.
#[derive(Clone, Debug)]
pub struct TriangularAlgebra {
    /// Labels in order; the units are implicit.
    pub units: Vec<String>,
    /// Sorted by (left, right, cell, index).
    pub elements: Vec<BasisElement>,
    /// Associative product μ on basis pairs, only nonzero values stored.
    pub products: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
    /// Operations of arity other than two found in the source structure, counted by arity.
    pub other_arities: BTreeMap<usize, usize>,
    lookup: HashMap<(PointSet, usize), usize>,
}

/// Residual of D² on the dual tensor algebra T(V).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorResidual {
    pub generator: usize,
    pub word: Vec<usize>,
    pub coefficient: Rational,
}

/// `(cell, index)` of each factor and the result, with the coefficient.
type RawProduct = ((PointSet, usize), (PointSet, usize), (PointSet, usize), Rational);

impl TriangularAlgebra {
    fn new(
        units: Vec<String>,
        mut elements: Vec<BasisElement>,
        raw: Vec<RawProduct>,
        other_arities: BTreeMap<usize, usize>,
    ) -> Self {
        elements.sort();
        let lookup: HashMap<(PointSet, usize), usize> =
            elements.iter().enumerate().map(|(k, e)| ((e.cell, e.index), k)).collect();
        let mut products: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
        for (a, b, c, v) in raw {
            let key = (lookup[&a], lookup[&b]);
            let out = products.entry(key).or_default();
            out.push((lookup[&c], v));
            out.sort_by_key(|p| p.0);
        }
        TriangularAlgebra { units, elements, products, other_arities, lookup }
    }

    pub fn element(&self, cell: PointSet, index: usize) -> Option<usize> {
        self.lookup.get(&(cell, index)).copied()
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Dimension of every nonzero block R_ij.
    pub fn block_dims(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for e in &self.elements {
            *out.entry((e.left, e.right)).or_insert(0) += 1;
        }
        out
    }

    pub fn product(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        self.products.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    /// m'(sa, sb) = (−1)^{|a|} s(ab) on the suspension.
    pub fn shifted_product(&self, a: usize, b: usize) -> Vec<(usize, Rational)> {
        let odd = self.elements[a].degree.rem_euclid(2) == 1;
        self.product(a, b).iter().map(|(c, v)| (*c, if odd { -v.clone() } else { v.clone() })).collect()
    }

    /// Products violating R_ij · R_jk ⊂ R_ik with i < j < k, or the degree.
    pub fn triangularity_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (&(a, b), terms) in &self.products {
            let (x, y) = (&self.elements[a], &self.elements[b]);
            let chained = x.left < x.right && x.right == y.left && y.left < y.right;
            let lands = terms.iter().all(|(c, _)| {
                let z = &self.elements[*c];
                z.left == x.left && z.right == y.right && z.degree == x.degree + y.degree
            });
            if !chained || !lands {
                out.push((a, b));
            }
        }
        out
    }

    fn multiply(&self, left: &[(usize, Rational)], right: &[(usize, Rational)]) -> BTreeMap<usize, Rational> {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (a, u) in left {
            for (b, v) in right {
                for (c, w) in self.product(*a, *b) {
                    *acc.entry(*c).or_insert_with(Rational::zero) += u * v * w;
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        acc
    }

    /// Basis triples with μ(μ(a, b), c) ≠ μ(a, μ(b, c)).
    pub fn associativity_failures(&self) -> Vec<(usize, usize, usize)> {
        let one = Rational::one();
        let mut by_left: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, e) in self.elements.iter().enumerate() {
            by_left.entry(e.left).or_default().push(k);
        }
        let mut out = Vec::new();
        for a in 0..self.dim() {
            for &b in by_left.get(&self.elements[a].right).into_iter().flatten() {
                for &c in by_left.get(&self.elements[b].right).into_iter().flatten() {
                    let ab = self.product(a, b);
                    let bc = self.product(b, c);
                    let lhs = self.multiply(ab, &[(c, one.clone())]);
                    let rhs = self.multiply(&[(a, one.clone())], bc);
                    if lhs != rhs {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    /// Expands D² on T(V), V dual to sR, with D v_c = Σ ⟨m'(a, b), c⟩ v_a v_b extended as a
    /// derivation (v_a has degree −|sa|).
    pub fn verify_tensor_d_squared(&self) -> Vec<TensorResidual> {
        let mut coproduct: BTreeMap<usize, Vec<(usize, usize, Rational)>> = BTreeMap::new();
        for &(a, b) in self.products.keys() {
            for (c, v) in self.shifted_product(a, b) {
                coproduct.entry(c).or_default().push((a, b, v));
            }
        }
        let mut out = Vec::new();
        for (&c, terms) in &coproduct {
            let mut acc: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
            for (a, b, v) in terms {
                for (x, y, w) in coproduct.get(a).into_iter().flatten() {
                    *acc.entry(vec![*x, *y, *b]).or_insert_with(Rational::zero) += v * w;
                }
                let odd = self.elements[*a].shifted_degree().rem_euclid(2) == 1;
                for (x, y, w) in coproduct.get(b).into_iter().flatten() {
                    let term = v * w;
                    *acc.entry(vec![*a, *x, *y]).or_insert_with(Rational::zero) += if odd { -term } else { term };
                }
            }
            out.extend(acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|(word, coefficient)| TensorResidual {
                generator: c,
                word,
                coefficient,
            }));
        }
        out
    }
}

/// The algebra of a line: e_ij of degree j − i for points i < j in coordinate order, with
/// e_ij · e_jk = e_ik.
pub fn build_r_1d(c: &PointConfig) -> Result<TriangularAlgebra, RelativeError> {
    if c.dim() != 1 {
        return Err(RelativeError::Dimension(c.dim()));
    }
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| c.points()[a].coords[0].cmp(&c.points()[b].coords[0]));
    let cell = |i: usize, j: usize| PointSet::from_iter([order[i], order[j]]);
    let r = order.len();
    let mut elements = Vec::new();
    let mut raw = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            elements.push(BasisElement { left: i, right: j, cell: cell(i, j), index: 0, degree: (j - i) as i32 });
            for k in j + 1..r {
                raw.push(((cell(i, j), 0), (cell(j, k), 0), (cell(i, k), 0), Rational::one()));
            }
        }
    }
    let units = order.iter().map(|&i| c.points()[i].label.clone()).collect();
    Ok(TriangularAlgebra::new(units, elements, raw, BTreeMap::new()))
}

/// R∞ from the all-infinite part of the mixed differential: F_B for every infinite geometric
/// polygon and coefficient basis element, μ read off the two-cell entries.
pub fn build_r_infty(
    ic: &InfinityConfig,
    md: &MixedDifferential,
    dt: &DecoratedTables,
) -> Result<TriangularAlgebra, RelativeError> {
    let mut elements = Vec::new();
    for g in md.tables.generators.iter().filter(|g| ic.is_infinite(g.marking)) {
        let (left, right) = ic.rays(g.marking);
        for index in 0..dt.block(g.marking).dim() {
            let degree = dt.degree(g.marking, index) + 1;
            elements.push(BasisElement { left, right, cell: g.marking, index, degree });
        }
    }
    let (split, violations) = md.split(ic);
    if let Some(e) = violations.first() {
        return Err(RelativeError::Closure(ic.config.describe(e.output)));
    }
    let mut raw = Vec::new();
    let mut other_arities = BTreeMap::new();
    for i in split.infinite {
        let e = &md.tables.entries[i];
        if e.arity() != 2 {
            *other_arities.entry(e.arity()).or_insert(0) += 1;
            continue;
        }
        let (a, b) = (e.inputs[0], e.inputs[1]);
        for x in 0..dt.block(a).dim() {
            for y in 0..dt.block(b).dim() {
                let Some((z, v)) = dt.apply_entry(i, &[x, y]) else { continue };
                // μ = (−1)^{|a|} m'
                let odd = (dt.degree(a, x) + 1).rem_euclid(2) == 1;
                raw.push(((a, x), (b, y), (e.output, z), if odd { -v } else { v }));
            }
        }
    }
    let units = ic.slope_order.iter().map(|&i| ic.config.label(i).to_string()).collect();
    Ok(TriangularAlgebra::new(units, elements, raw, other_arities))
}

/// Whether polygons a (left) and b (right) should multiply: they share the ray (j, ∞) and
/// their union is a convex geometric polygon.
pub fn union_is_product(ic: &InfinityConfig, a: PointSet, b: PointSet) -> bool {
    let c = &ic.config;
    let (_, j) = ic.rays(a);
    let (k, _) = ic.rays(b);
    if j != k {
        return false;
    }
    let shared = ic.slope_order[j];
    let u = a.union(b);
    a.intersection(b) == PointSet::from_iter([shared, ic.infinity]) && c.is_vertex(shared, u) && c.is_geometric(u)
}
