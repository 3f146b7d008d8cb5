use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::Rng;

use super::{circuit_equations, BinomialEquation, CocycleLattice, McElement, McError, McModel};
use crate::exactla::{int, Rational};
use crate::geometry::{Config, PointSet};
use crate::linfty::{LinftyError, StructureTables, Variant};
use crate::subdivision::enumerate_regular_triangulations;

/// Outcome of the MC test. The residual at a circuit is Πγ(T₊) − Πγ(T₋) in the multiplicative
/// model and Σβ(T₊) − Σβ(T₋) in the additive one; only nonzero residuals are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McVerdict {
    pub is_mc: bool,
    pub residual: BTreeMap<PointSet, Rational>,
    pub circuits_checked: usize,
}

fn check_complete(c: &Config, gamma: &McElement) -> Result<(), McError> {
    for s in super::simplices(c) {
        match gamma.values.get(&s) {
            None => return Err(McError::Incomplete(s)),
            Some(v) if gamma.model == McModel::Multiplicative && v.is_zero() => return Err(McError::Incomplete(s)),
            _ => {}
        }
    }
    Ok(())
}

fn side_value(gamma: &McElement, side: &[PointSet]) -> Rational {
    match gamma.model {
        McModel::Multiplicative => side.iter().fold(Rational::one(), |acc, s| acc * gamma.get(*s)),
        McModel::Additive => side.iter().fold(Rational::zero(), |acc, s| acc + gamma.get(*s)),
    }
}

fn binomial_residual(gamma: &McElement, eq: &BinomialEquation) -> Rational {
    side_value(gamma, &eq.left) - side_value(gamma, &eq.right)
}

/// Σ_n λ_n(γ^n)/n! at the circuit `z`, read off the tables. Additively γ_σ = e^β_σ, and the
/// exponentials of distinct rationals are linearly independent, so the sum vanishes exactly
/// when the coefficients grouped by exponent do.
fn direct_vanishes(tables: &StructureTables, gamma: &McElement, z: PointSet) -> bool {
    let terms = tables
        .with_output(z)
        .filter(|e| e.inputs.iter().all(|s| gamma.values.contains_key(s)))
        .map(|e| (side_value(gamma, &e.inputs), e.coefficient.clone()));
    match gamma.model {
        McModel::Multiplicative => terms.fold(Rational::zero(), |acc, (v, c)| acc + c * v).is_zero(),
        McModel::Additive => {
            let mut grouped: BTreeMap<Rational, Rational> = BTreeMap::new();
            for (v, c) in terms {
                *grouped.entry(v).or_insert_with(Rational::zero) += c;
            }
            grouped.values().all(Zero::is_zero)
        }
    }
}

/// Decides MC-ness twice, from the marked structure tables and from the circuit binomials,
/// and insists that both agree.
pub fn is_mc(c: &Config, gamma: &McElement, tables: &StructureTables) -> Result<McVerdict, McError> {
    if tables.variant != Variant::Marked {
        return Err(LinftyError::NeedsMarked.into());
    }
    check_complete(c, gamma)?;
    let system = circuit_equations(c);
    let mut residual = BTreeMap::new();
    for eq in &system.equations {
        let r = binomial_residual(gamma, eq);
        let binomial = r.is_zero();
        if binomial != direct_vanishes(tables, gamma, eq.circuit.support) {
            return Err(McError::Disagreement(eq.circuit.support));
        }
        if !binomial {
            residual.insert(eq.circuit.support, r);
        }
    }
    Ok(McVerdict { is_mc: residual.is_empty(), residual, circuits_checked: system.equations.len() })
}

/// β_σ ↦ β_σ + ∫_σ ℓ for the affine function ℓ(x) = ℓ₀ + Σ ℓ_i x_i.
pub fn affine_gauge(c: &Config, beta: &McElement, affine: &[Rational]) -> McElement {
    assert_eq!(beta.model, McModel::Additive, "the gauge acts on exponents");
    assert_eq!(affine.len(), c.dim() + 1);
    let eval = |p: usize| c.coords(p).iter().zip(&affine[1..]).fold(affine[0].clone(), |acc, (x, a)| acc + x * a);
    let values = beta
        .values
        .iter()
        .map(|(&s, b)| {
            let sum = s.iter().map(eval).fold(Rational::zero(), |a, v| a + v);
            let integral = c.volume(s) * sum / int(s.len() as i64);
            (s, b + integral)
        })
        .collect();
    McElement { model: McModel::Additive, values }
}

/// W(P) = Πγ over any regular triangulation of the marking (a sum additively). The value is
/// checked to be the same on every regular triangulation.
pub fn polytope_weight(c: &Config, gamma: &McElement, marking: PointSet, seed: u64) -> Result<Rational, McError> {
    check_complete(c, gamma)?;
    let system = circuit_equations(c);
    if system
        .equations
        .iter()
        .any(|eq| eq.circuit.support.is_subset(marking) && !binomial_residual(gamma, eq).is_zero())
    {
        return Err(McError::NotMc);
    }
    let weights: BTreeSet<Rational> =
        enumerate_regular_triangulations(c, marking, seed).iter().map(|t| side_value(gamma, t.cells())).collect();
    match weights.len() {
        1 => Ok(weights.into_iter().next().expect("one weight")),
        _ => Err(McError::WeightMismatch(marking)),
    }
}

/// A random point of the cocycle lattice, β = Σ r_k b_k with |r_k| ≤ 2, as exponents or as
/// γ_σ = 2^β_σ.
pub fn random_mc_element<R: Rng>(lattice: &CocycleLattice, model: McModel, rng: &mut R) -> McElement {
    let simplices = &lattice.system.simplices;
    let mut beta = vec![num_bigint::BigInt::zero(); simplices.len()];
    for b in &lattice.basis {
        let r: i64 = rng.gen_range(-2..=2);
        for (acc, x) in beta.iter_mut().zip(b) {
            *acc += x * r;
        }
    }
    let values = simplices
        .iter()
        .zip(beta)
        .map(|(&s, e)| {
            let v = match model {
                McModel::Additive => Rational::from_integer(e),
                McModel::Multiplicative => power_of_two(&e),
            };
            (s, v)
        })
        .collect();
    McElement { model, values }
}

fn power_of_two(e: &num_bigint::BigInt) -> Rational {
    let k: i32 = e.try_into().expect("small exponent");
    Rational::from_integer(2.into()).pow(k)
}

/// Moves one random simplex value off the lattice: ×3 multiplicatively, +1 additively.
pub fn perturb<R: Rng>(gamma: &McElement, rng: &mut R) -> McElement {
    let mut out = gamma.clone();
    let keys: Vec<PointSet> = out.values.keys().copied().collect();
    let s = keys[rng.gen_range(0..keys.len())];
    let v = out.values.get_mut(&s).expect("present");
    *v = match out.model {
        McModel::Multiplicative => v.clone() * int(3),
        McModel::Additive => v.clone() + int(1),
    };
    out
}
