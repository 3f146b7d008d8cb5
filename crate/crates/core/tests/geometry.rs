use num_traits::Zero;
use proptest::prelude::*;
use secpoly_core::exactla::{int, Rational};
use secpoly_core::fixtures;
use secpoly_core::geometry::*;

fn labels(c: &Config, s: PointSet) -> Vec<String> {
    c.labels_of(s)
}

#[test]
fn orient_examples() {
    let pc = PointConfig::from_i64(2, &[("a", &[0, 0]), ("b", &[1, 0]), ("c", &[0, 1])]);
    use PointRef::*;
    assert_eq!(pc.orient(&[Finite(0), Finite(1), Finite(2)]), 1);
    assert_eq!(pc.orient(&[Finite(0), Finite(2), Finite(1)]), -1);
    let pc = pc.with_infinity(fixtures::up()).unwrap();
    assert_eq!(pc.orient(&[Finite(0), Finite(1), Infinity]), 1);
}

#[test]
fn general_position_examples() {
    assert!(check_general_position(&fixtures::square()).passes);
    let line = PointConfig::from_i64(2, &[("a", &[0, 0]), ("b", &[1, 1]), ("c", &[2, 2])]);
    let r = check_general_position(&line);
    assert!(!r.passes);
    assert_eq!(r.violations.len(), 1);
    assert_eq!(r.violations[0].labels, vec!["a", "b", "c"]);
    let sq = fixtures::square().with_infinity(fixtures::up()).unwrap();
    let r = check_general_position(&sq);
    assert!(!r.passes);
    assert!(r.violations.iter().all(|v| v.kind == ViolationKind::DependentWithInfinity));
    assert_eq!(r.violations.len(), 2);
    let sheared = fixtures::sheared_square().with_infinity(fixtures::up()).unwrap();
    assert!(check_general_position(&sheared).passes);
    assert!(matches!(Config::new(&line), Err(GeometryError::GeneralPosition(_))));
}

#[test]
fn input_validation() {
    use secpoly_core::geometry::LabeledPoint;
    let p = |l: &str, c: &[i64]| LabeledPoint { label: l.into(), coords: c.iter().map(|&x| int(x)).collect() };
    assert_eq!(
        PointConfig::new(2, vec![p("a", &[0, 0]), p("a", &[1, 0])], None).unwrap_err(),
        GeometryError::DuplicateLabel("a".into())
    );
    assert!(matches!(PointConfig::new(2, vec![p("a", &[0])], None), Err(GeometryError::Dimension(_))));
    assert!(matches!(
        PointConfig::new(2, vec![p(INFINITY_LABEL, &[0, 0])], None),
        Err(GeometryError::ReservedLabel(_))
    ));
    assert_eq!(
        PointConfig::new(2, vec![p("a", &[0, 0])], Some(vec![int(0), int(0)])).unwrap_err(),
        GeometryError::ZeroDirection
    );
}

#[test]
fn hull_examples() {
    let c = Config::new(&fixtures::triangle_with_interior_point()).unwrap();
    assert_eq!(labels(&c, c.vertices(c.all())), vec!["p1", "p2", "p3"]);
    let sq = Config::new(&fixtures::square()).unwrap();
    let cyc: Vec<&str> = sq.ccw_vertices(sq.all()).into_iter().map(|i| sq.label(i)).collect();
    assert_eq!(cyc, vec!["00", "10", "11", "01"]);
    assert_eq!(sq.facets(sq.all()).len(), 4);
    assert_eq!(sq.volume(sq.all()), int(1));
}

#[test]
fn symbolic_hull_with_infinity() {
    let pc = PointConfig::from_i64(2, &[("a", &[0, 0]), ("b", &[2, 1])]).with_infinity(fixtures::up()).unwrap();
    let c = Config::new(&pc).unwrap();
    let inf = c.infinity().unwrap();
    assert_eq!(c.label(inf), INFINITY_LABEL);
    let all = c.all();
    assert_eq!(c.vertices(all), all);
    let unbounded: Vec<_> = c.facets(all).into_iter().filter(|f| f.vertices.contains(inf)).collect();
    assert_eq!(unbounded.len(), 2);
}

#[test]
fn far_point_agrees_with_symbolic_orientation() {
    let pc = fixtures::random_config(2, 6, 11, 5, true);
    let c = Config::new(&pc).unwrap();
    let inf = c.infinity().unwrap();
    let finite: Vec<usize> = (0..c.len()).filter(|&i| i != inf).collect();
    for (x, &a) in finite.iter().enumerate() {
        for &b in &finite[x + 1..] {
            // index positions of finite labels coincide between pc and c because ∞ sorts last
            let sym = pc.orient(&[PointRef::Finite(a), PointRef::Finite(b), PointRef::Infinity]);
            assert_eq!(c.orient(&[a, b, inf]), sym);
        }
    }
}

#[test]
fn circuit_examples() {
    let sq = Config::new(&fixtures::square()).unwrap();
    let cs = enumerate_circuits(&sq);
    assert_eq!(cs.len(), 1);
    assert_eq!(labels(&sq, cs[0].positive), vec!["00", "11"]);
    assert_eq!(labels(&sq, cs[0].negative), vec!["01", "10"]);
    // positive triangulation uses the diagonal 00-11
    for s in cs[0].positive_triangulation() {
        assert!(s.contains(sq.index_of("00").unwrap()) && s.contains(sq.index_of("11").unwrap()));
    }
    let t = Config::new(&fixtures::triangle_with_interior_point()).unwrap();
    let cs = enumerate_circuits(&t);
    assert_eq!(cs.len(), 1);
    assert_eq!(labels(&t, cs[0].positive), vec!["p1", "p2", "p3"]);
    assert_eq!(labels(&t, cs[0].negative), vec!["q"]);
    assert_eq!(cs[0].positive_triangulation(), vec![t.all().without(3)]);
    assert_eq!(cs[0].negative_triangulation().len(), 3);
    let s = Config::new(&fixtures::triangle()).unwrap();
    assert!(enumerate_circuits(&s).is_empty());
}

#[test]
fn subpolytope_examples() {
    let sq = Config::new(&fixtures::square()).unwrap();
    let subs = enumerate_subpolytopes(&sq);
    assert_eq!(subs.len(), 5);
    assert_eq!(subs.iter().filter(|m| m.is_simplex(2)).count(), 4);
    let t = Config::new(&fixtures::triangle_with_interior_point()).unwrap();
    let subs = enumerate_subpolytopes(&t);
    assert_eq!(subs.len(), 4);
    assert!(subs.iter().all(|m| m.geometric));
    // the big triangle without its interior point is not geometric
    assert!(!t.is_geometric(t.all().without(3)));
    let s = Config::new(&fixtures::triangle()).unwrap();
    assert_eq!(enumerate_subpolytopes(&s).len(), 1);
}

#[test]
fn infinite_family_split() {
    let pc = fixtures::triangle().with_infinity(fixtures::up()).unwrap();
    let c = Config::new(&pc).unwrap();
    let fam = enumerate_subpolytopes_split(&c);
    assert_eq!(fam.finite, vec![c.finite()]);
    assert!(fam.infinite.iter().all(|b| c.is_infinite(*b)));
    assert!(!fam.infinite.is_empty());
}

#[test]
fn volumes_of_simplices_are_lebesgue() {
    let t = Config::new(&fixtures::triangle_with_interior_point()).unwrap();
    assert_eq!(t.simplex(t.all().without(3)).unwrap().volume, Rational::new(9.into(), 2.into()));
    assert_eq!(t.volume(t.all()), Rational::new(9.into(), 2.into()));
}

/// Radon oracle for d = 2 via orientation tests only.
fn radon_holds(c: &Config, circ: &Circuit) -> bool {
    let p = circ.positive.to_vec();
    let n = circ.negative.to_vec();
    match (p.len(), n.len()) {
        (2, 2) => {
            let s1 = c.orient(&[p[0], p[1], n[0]]) * c.orient(&[p[0], p[1], n[1]]);
            let s2 = c.orient(&[n[0], n[1], p[0]]) * c.orient(&[n[0], n[1], p[1]]);
            s1 < 0 && s2 < 0
        }
        (3, 1) => c.in_hull(n[0], circ.positive),
        _ => false,
    }
}

fn affine_image(pc: &PointConfig, m: [[i64; 2]; 2], t: [i64; 2]) -> PointConfig {
    let pts = pc
        .points()
        .iter()
        .map(|p| LabeledPoint {
            label: p.label.clone(),
            coords: (0..2).map(|r| int(m[r][0]) * &p.coords[0] + int(m[r][1]) * &p.coords[1] + int(t[r])).collect(),
        })
        .collect();
    PointConfig::new(2, pts, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orient_alternating_and_translation_invariant(seed in 0u64..10_000, dx in -5i64..5, dy in -5i64..5) {
        let pc = fixtures::random_config(2, 4, seed, 6, false);
        let c = Config::new(&pc).unwrap();
        let s = c.orient(&[0, 1, 2]);
        prop_assert_eq!(c.orient(&[1, 0, 2]), -s);
        prop_assert_eq!(c.orient(&[0, 2, 1]), -s);
        prop_assert_eq!(c.orient(&[1, 2, 0]), s);
        let moved = affine_image(&pc, [[1, 0], [0, 1]], [dx, dy]);
        let cm = Config::new(&moved).unwrap();
        prop_assert_eq!(cm.orient(&[0, 1, 2]), s);
    }

    #[test]
    fn circuits_have_radon_property(seed in 0u64..10_000, n in 4usize..=7) {
        let c = Config::new(&fixtures::random_config(2, n, seed, 8, false)).unwrap();
        for circ in enumerate_circuits(&c) {
            prop_assert!(radon_holds(&c, &circ));
            let s: i64 = circ.dependency.iter().map(|x| i64::try_from(x.clone()).unwrap()).sum();
            prop_assert_eq!(s, 0);
            prop_assert!(circ.positive.len() >= circ.negative.len());
        }
    }

    #[test]
    fn geometric_count_affine_invariant(
        seed in 0u64..10_000, n in 4usize..=7,
        a in -3i64..=3, b in -3i64..=3, cc in -3i64..=3, d in -3i64..=3,
    ) {
        prop_assume!(a * d - b * cc != 0);
        let pc = fixtures::random_config(2, n, seed, 8, false);
        let moved = affine_image(&pc, [[a, b], [cc, d]], [1, -2]);
        let c1 = Config::new(&pc).unwrap();
        let c2 = Config::new(&moved).unwrap();
        prop_assert_eq!(enumerate_subpolytopes(&c1), enumerate_subpolytopes(&c2));
        let total: Rational = c1.simplices_in(c1.all()).iter().map(|s| c1.simplex(*s).unwrap().volume.clone())
            .fold(Rational::zero(), |x, y| x + y);
        prop_assert!(total >= c1.volume(c1.all()));
    }

    #[test]
    fn three_dimensional_circuits(seed in 0u64..10_000) {
        let c = Config::new(&fixtures::random_config(3, 6, seed, 6, false)).unwrap();
        let circs = enumerate_circuits(&c);
        prop_assert_eq!(circs.len(), 6);
        for circ in circs {
            prop_assert_eq!(circ.positive.len() + circ.negative.len(), 5);
            prop_assert_eq!(circ.positive_triangulation().len(), circ.negative.len());
        }
    }
}
