use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secpoly_core::exactla::{int, parse_rational, Rational};
use secpoly_core::fixtures;
use secpoly_core::geometry::{Config, PointConfig, PointSet};
use secpoly_core::linfty::{build_structure_tables, StructureTables, Variant};
use secpoly_core::mc::*;

fn cfg(pc: &PointConfig) -> Config {
    Config::new(pc).unwrap()
}

fn set(c: &Config, labels: &[&str]) -> PointSet {
    c.set_of(labels).unwrap()
}

fn marked(c: &Config) -> StructureTables {
    build_structure_tables(c, Variant::Marked, 0).unwrap()
}

fn element(c: &Config, model: McModel, values: &[(&[&str], i64)]) -> McElement {
    let values: BTreeMap<_, _> = values.iter().map(|(l, v)| (set(c, l), int(*v))).collect();
    assert_eq!(values.len(), simplices(c).len());
    McElement { model, values }
}

/// Square with T₊ = {00 10 11, 00 01 11} and T₋ = {00 01 10, 01 10 11}.
fn square_gamma(c: &Config, plus: (i64, i64), minus: (i64, i64)) -> McElement {
    element(
        c,
        McModel::Multiplicative,
        &[
            (&["00", "10", "11"], plus.0),
            (&["00", "01", "11"], plus.1),
            (&["00", "01", "10"], minus.0),
            (&["01", "10", "11"], minus.1),
        ],
    )
}

#[test]
fn square_has_one_equation() {
    let c = cfg(&fixtures::square());
    let sys = circuit_equations(&c);
    assert_eq!(sys.equations.len(), 1);
    let eq = &sys.equations[0];
    let mut left = vec![set(&c, &["00", "10", "11"]), set(&c, &["00", "01", "11"])];
    let mut right = vec![set(&c, &["00", "01", "10"]), set(&c, &["01", "10", "11"])];
    left.sort();
    right.sort();
    assert_eq!(eq.left, left);
    assert_eq!(eq.right, right);
    let (l, r) = &sys.exponent_vectors()[0];
    assert_eq!(l.iter().map(|&x| x as u32).sum::<u32>(), 2);
    assert!(l.iter().zip(r).all(|(a, b)| a + b == 1));
}

#[test]
fn triangle_with_interior_point_equation() {
    let c = cfg(&fixtures::triangle_with_interior_point());
    let sys = circuit_equations(&c);
    assert_eq!(sys.equations.len(), 1);
    let eq = &sys.equations[0];
    assert_eq!(eq.left, vec![set(&c, &["p1", "p2", "p3"])]);
    assert_eq!(eq.right.len(), 3);
    assert!(eq.right.iter().all(|s| s.contains(c.index_of("q").unwrap())));
}

#[test]
fn simplex_has_empty_system() {
    let c = cfg(&fixtures::simplex(2));
    assert!(circuit_equations(&c).equations.is_empty());
    let t = marked(&c);
    let gamma = McElement::constant(&c, McModel::Multiplicative, int(7));
    assert!(is_mc(&c, &gamma, &t).unwrap().is_mc);
    let lattice = cocycle_lattice(&c);
    assert_eq!(lattice.rank(), 1);
}

#[test]
fn square_verdicts() {
    let c = cfg(&fixtures::square());
    let t = marked(&c);
    let one = McElement::constant(&c, McModel::Multiplicative, int(1));
    assert!(is_mc(&c, &one, &t).unwrap().is_mc);

    let good = square_gamma(&c, (2, 3), (6, 1));
    let v = is_mc(&c, &good, &t).unwrap();
    assert!(v.is_mc && v.residual.is_empty());
    assert_eq!(v.circuits_checked, 1);

    let bad = square_gamma(&c, (2, 1), (1, 1));
    let v = is_mc(&c, &bad, &t).unwrap();
    assert!(!v.is_mc);
    assert_eq!(v.residual.len(), 1);
    assert_eq!(v.residual[&c.all()], int(1));
}

#[test]
fn geometric_tables_are_refused() {
    let c = cfg(&fixtures::square());
    let t = build_structure_tables(&c, Variant::Geometric, 0).unwrap();
    let one = McElement::constant(&c, McModel::Multiplicative, int(1));
    assert!(matches!(is_mc(&c, &one, &t), Err(McError::Linfty(_))));
}

#[test]
fn incomplete_elements_are_refused() {
    let c = cfg(&fixtures::square());
    let t = marked(&c);
    let mut gamma = McElement::constant(&c, McModel::Multiplicative, int(1));
    let s = *gamma.values.keys().next().unwrap();
    gamma.values.insert(s, int(0));
    assert_eq!(is_mc(&c, &gamma, &t), Err(McError::Incomplete(s)));
    gamma.values.remove(&s);
    assert_eq!(is_mc(&c, &gamma, &t), Err(McError::Incomplete(s)));
}

#[test]
fn interior_point_gamma() {
    let c = cfg(&fixtures::triangle_with_interior_point());
    let t = marked(&c);
    let gamma = element(
        &c,
        McModel::Multiplicative,
        &[(&["p1", "p2", "q"], 2), (&["p2", "p3", "q"], 3), (&["p1", "p3", "q"], 5), (&["p1", "p2", "p3"], 30)],
    );
    assert!(is_mc(&c, &gamma, &t).unwrap().is_mc);
    let mut off = gamma.clone();
    off.values.insert(set(&c, &["p1", "p2", "p3"]), int(31));
    let v = is_mc(&c, &off, &t).unwrap();
    assert_eq!(v.residual.values().next().unwrap(), &int(1));
}

#[test]
fn square_lattice() {
    let c = cfg(&fixtures::square());
    let l = cocycle_lattice(&c);
    assert_eq!(l.rank(), 3);
    assert_eq!(l.matrix_rank, 1);
    let cols = &l.system.simplices;
    let beta = |plus: i64, minus: i64| -> Vec<BigInt> {
        cols.iter().map(|s| if l.system.equations[0].left.contains(s) { plus.into() } else { minus.into() }).collect()
    };
    assert!(l.in_semigroup(&beta(1, 1)));
    assert!(!l.contains(&beta(1, 0)));
    assert!(l.contains(&beta(-1, -1)) && !l.in_semigroup(&beta(-1, -1)));
    assert!(l.basis.iter().all(|b| l.contains(b)));
}

#[test]
fn square_weight() {
    let c = cfg(&fixtures::square());
    let good = square_gamma(&c, (2, 3), (6, 1));
    assert_eq!(polytope_weight(&c, &good, c.all(), 0).unwrap(), int(6));
    let one = McElement::constant(&c, McModel::Multiplicative, int(1));
    assert_eq!(polytope_weight(&c, &one, c.all(), 0).unwrap(), int(1));
    let bad = square_gamma(&c, (2, 1), (1, 1));
    assert_eq!(polytope_weight(&c, &bad, c.all(), 0), Err(McError::NotMc));
    // a non-MC element still has a well-defined weight on a subpolytope without circuits
    let tri = set(&c, &["00", "10", "11"]);
    assert_eq!(polytope_weight(&c, &bad, tri, 0).unwrap(), int(2));
}

#[test]
fn area_is_an_additive_cocycle() {
    for pc in
        [fixtures::square(), fixtures::pentagon(), fixtures::hexagon(), fixtures::pentagon_with_two_interior_points()]
    {
        let c = cfg(&pc);
        let beta = area_exponents(&c);
        assert!(cocycle_lattice(&c).is_additive_cocycle(&beta));
        assert!(is_mc(&c, &beta, &marked(&c)).unwrap().is_mc);
        assert_eq!(polytope_weight(&c, &beta, c.all(), 0).unwrap(), c.volume(c.all()));
    }
}

#[test]
fn affine_gauge_preserves_cocycles() {
    let c = cfg(&fixtures::pentagon_with_two_interior_points());
    let lattice = cocycle_lattice(&c);
    let zero = McElement::constant(&c, McModel::Additive, int(0));
    // ∫_σ 1 is the area
    assert_eq!(affine_gauge(&c, &zero, &[int(1), int(0), int(0)]), area_exponents(&c));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let beta = random_mc_element(&lattice, McModel::Additive, &mut rng);
        let ell: Vec<Rational> = (0..3).map(|_| int(rand::Rng::gen_range(&mut rng, -5..=5))).collect();
        assert!(lattice.is_additive_cocycle(&affine_gauge(&c, &beta, &ell)));
    }
}

#[test]
fn vertex_sum_gauge_is_not_a_cocycle() {
    // without the volume weight the vertex sum fails on the interior-point circuit
    let c = cfg(&fixtures::triangle_with_interior_point());
    let lattice = cocycle_lattice(&c);
    let naive = McElement {
        model: McModel::Additive,
        values: simplices(&c)
            .into_iter()
            .map(|s| (s, s.iter().map(|p| c.coords(p)[0].clone()).fold(int(0), |a, x| a + x)))
            .collect(),
    };
    assert!(!lattice.is_additive_cocycle(&naive));
}

#[test]
fn additive_residuals() {
    let c = cfg(&fixtures::square());
    let t = marked(&c);
    let mut beta = area_exponents(&c);
    let s = set(&c, &["00", "10", "11"]);
    beta.values.insert(s, parse_rational("3/2").unwrap());
    let v = is_mc(&c, &beta, &t).unwrap();
    assert_eq!(v.residual[&c.all()], int(1));
}

fn random_draws(c: &Config, draws: usize, seed: u64) -> (usize, usize) {
    let t = marked(c);
    let lattice = cocycle_lattice(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut mc, mut non) = (0, 0);
    for i in 0..draws {
        let model = if i % 3 == 0 { McModel::Additive } else { McModel::Multiplicative };
        let forced = random_mc_element(&lattice, model, &mut rng);
        let gamma = if i % 2 == 0 { forced } else { perturb(&forced, &mut rng) };
        let v = is_mc(c, &gamma, &t).expect("verdicts agree");
        if i % 2 == 0 {
            assert!(v.is_mc);
        }
        if v.is_mc {
            mc += 1;
        } else {
            non += 1;
        }
    }
    (mc, non)
}

#[test]
fn direct_and_binomial_agree_on_fixtures() {
    for pc in [fixtures::square(), fixtures::hexagon(), fixtures::pentagon_with_two_interior_points()] {
        let c = cfg(&pc);
        let (mc, non) = random_draws(&c, 120, 11);
        assert!(mc >= 60 && non > 0);
    }
}

fn check_lattice_ranks(c: &Config) {
    let l = cocycle_lattice(c);
    assert_eq!(l.rank() + l.matrix_rank, l.system.simplices.len());
    assert!(l.basis.iter().all(|b| l.contains(b)));
    assert!(l.is_additive_cocycle(&area_exponents(c)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_planar_configs(n in 4usize..7, seed in 0u64..1000) {
        let c = cfg(&fixtures::random_config(2, n, seed, 20, false));
        check_lattice_ranks(&c);
        random_draws(&c, 100, seed);
    }

    #[test]
    fn random_spatial_configs(n in 5usize..7, seed in 0u64..1000) {
        let c = cfg(&fixtures::random_config(3, n, seed, 12, false));
        check_lattice_ranks(&c);
        random_draws(&c, 100, seed);
    }
}
