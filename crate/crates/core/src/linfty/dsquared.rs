use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::StructureTables;
use crate::exactla::Rational;
use crate::geometry::PointSet;

/// Nonzero coefficient left in d(d(v_generator)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub generator: PointSet,
    pub monomial: Vec<PointSet>,
    pub coefficient: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DSquaredReport {
    pub generators_checked: usize,
    pub terms_expanded: usize,
    pub residuals: Vec<Residual>,
}

impl DSquaredReport {
    pub fn passes(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Sorts a word of graded-commutative generators, returning the Koszul sign, or `None` when an
/// odd generator repeats (the monomial vanishes).
pub fn koszul_sort(word: &mut [PointSet], odd: impl Fn(PointSet) -> bool) -> Option<i8> {
    let mut sign = 1i8;
    // insertion sort, counting transpositions of odd pairs
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1] > word[j] {
            if odd(word[j - 1]) && odd(word[j]) {
                sign = -sign;
            }
            word.swap(j - 1, j);
            j -= 1;
        }
    }
    if word.windows(2).any(|w| w[0] == w[1] && odd(w[0])) {
        return None;
    }
    Some(sign)
}

/// Expands d² on every generator of S(V) by the Leibniz rule; V_B sits in degree −dim Σ(B).
pub fn verify_d_squared(t: &StructureTables) -> DSquaredReport {
    let parity: HashMap<PointSet, bool> = t.generators.iter().map(|g| (g.marking, g.dim % 2 == 1)).collect();
    let odd = |b: PointSet| parity.get(&b).copied().unwrap_or(false);
    let mut report = DSquaredReport::default();
    for g in &t.generators {
        report.generators_checked += 1;
        let mut acc: BTreeMap<Vec<PointSet>, Rational> = BTreeMap::new();
        for outer in t.with_output(g.marking) {
            let word = &outer.inputs;
            let mut prefix_odd = false;
            for (nu, &factor) in word.iter().enumerate() {
                for inner in t.with_output(factor) {
                    report.terms_expanded += 1;
                    let mut m: Vec<PointSet> = word[..nu].to_vec();
                    m.extend(inner.inputs.iter().copied());
                    m.extend(word[nu + 1..].iter().copied());
                    let Some(sort_sign) = koszul_sort(&mut m, odd) else { continue };
                    let mut coef = &outer.coefficient * &inner.coefficient;
                    if prefix_odd != (sort_sign < 0) {
                        coef = -coef;
                    }
                    *acc.entry(m).or_insert_with(Rational::zero) += coef;
                }
                prefix_odd ^= odd(factor);
            }
        }
        for (monomial, coefficient) in acc {
            if !coefficient.is_zero() {
                report.residuals.push(Residual { generator: g.marking, monomial, coefficient });
            }
        }
    }
    report
}
