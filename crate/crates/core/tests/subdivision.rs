use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secpoly_core::exactla::{int, Rational};
use secpoly_core::fixtures;
use secpoly_core::geometry::{Config, PointConfig, PointSet};
use secpoly_core::subdivision::*;

fn cfg(pc: &PointConfig) -> Config {
    Config::new(pc).unwrap()
}

fn set(c: &Config, labels: &[&str]) -> PointSet {
    c.set_of(labels).unwrap()
}

fn lift(c: &Config, vals: &[(&str, i64)]) -> Vec<Rational> {
    let mut psi = vec![int(0); c.len()];
    for (l, v) in vals {
        psi[c.index_of(l).unwrap()] = int(*v);
    }
    psi
}

#[test]
fn lower_hull_examples() {
    let c = cfg(&fixtures::square());
    let s = lower_hull_subdivision(&c, c.all(), &vec![int(0); 4]);
    assert!(s.is_trivial());
    let psi = lift(&c, &[("00", 0), ("11", 0), ("10", 1), ("01", 1)]);
    let s = lower_hull_subdivision(&c, c.all(), &psi);
    assert_eq!(s.cells(), &[set(&c, &["00", "01", "11"]), set(&c, &["00", "10", "11"])]);
    let t = cfg(&fixtures::triangle_with_interior_point());
    let s = lower_hull_subdivision(&t, t.all(), &lift(&t, &[("q", 1)]));
    assert_eq!(s.cells(), &[set(&t, &["p1", "p2", "p3"])]);
    assert!(!s.is_trivial());
}

#[test]
fn regularity_examples() {
    let c = cfg(&fixtures::square());
    for diag in [["00", "11"], ["10", "01"]] {
        let other: Vec<&str> = ["00", "10", "11", "01"].into_iter().filter(|l| !diag.contains(l)).collect();
        let s = Subdivision::new(c.all(), other.iter().map(|o| set(&c, &[diag[0], diag[1], o])).collect());
        assert!(is_regular(&c, &s).unwrap().is_regular());
    }
    assert!(is_regular(&c, &Subdivision::trivial(c.all())).unwrap().is_regular());
}

/// Outer triangle with a homothetic inner triangle; the twisted triangulation is not regular.
fn mother_of_all_examples() -> PointConfig {
    PointConfig::from_i64(
        2,
        &[("1", &[0, 0]), ("2", &[12, 0]), ("3", &[6, 12]), ("4", &[3, 2]), ("5", &[9, 2]), ("6", &[6, 8])],
    )
}

#[test]
fn twisted_triangulation_is_refuted() {
    let c = cfg(&mother_of_all_examples());
    let cells: Vec<PointSet> = [
        ["1", "2", "5"],
        ["1", "5", "4"],
        ["2", "3", "6"],
        ["2", "6", "5"],
        ["3", "1", "4"],
        ["3", "4", "6"],
        ["4", "5", "6"],
    ]
    .iter()
    .map(|t| set(&c, t))
    .collect();
    let s = Subdivision::new(c.all(), cells);
    validate(&c, &s).unwrap();
    assert_eq!(is_regular(&c, &s).unwrap(), Regularity::NotRegular);
    let regular = enumerate_regular_triangulations(&c, c.all(), 1);
    assert!(!regular.contains(&s));
    assert_eq!(regular, brute_force_regular_triangulations(&c, c.all()));
}

#[test]
fn malformed_subdivisions_rejected() {
    let c = cfg(&fixtures::square());
    let overlap = Subdivision::new(c.all(), vec![set(&c, &["00", "10", "11"]), set(&c, &["00", "10", "01"])]);
    assert!(matches!(is_regular(&c, &overlap), Err(SubdivisionError::Overlap(..))));
    let gap = Subdivision::new(c.all(), vec![set(&c, &["00", "10", "11"])]);
    assert_eq!(is_regular(&c, &gap), Err(SubdivisionError::VolumeMismatch));
}

#[test]
fn pw_affine_dim_examples() {
    let s = cfg(&fixtures::triangle());
    let triv = Subdivision::trivial(s.all());
    assert_eq!(pw_affine_dim(&s, &triv), 3);
    assert_eq!(reduced_dim(&s, &triv), 0);
    let c = cfg(&fixtures::square());
    let t = Subdivision::new(c.all(), vec![set(&c, &["00", "10", "11"]), set(&c, &["00", "01", "11"])]);
    assert_eq!(reduced_dim(&c, &t), 1);
    let p = cfg(&fixtures::pentagon());
    let split = Subdivision::new(p.all(), vec![set(&p, &["a", "b", "c"]), set(&p, &["a", "c", "d", "e"])]);
    assert_eq!(reduced_dim(&p, &split), 1);
}

#[test]
fn coarse_examples() {
    let t = cfg(&fixtures::triangle_with_interior_point());
    let drop = Subdivision::new(t.all(), vec![set(&t, &["p1", "p2", "p3"])]);
    assert!(is_coarse(&t, &drop).unwrap());
    let p = cfg(&fixtures::pentagon());
    let split = Subdivision::new(p.all(), vec![set(&p, &["a", "b", "c"]), set(&p, &["a", "c", "d", "e"])]);
    assert!(is_coarse(&p, &split).unwrap());
    let c = cfg(&fixtures::square());
    let diag = Subdivision::new(c.all(), vec![set(&c, &["00", "10", "11"]), set(&c, &["00", "01", "11"])]);
    assert!(is_coarse(&c, &diag).unwrap());
    assert!(!is_coarse(&c, &Subdivision::trivial(c.all())).unwrap());
    // a pentagon triangulation has reduced dimension 2
    let tri = Subdivision::new(
        p.all(),
        vec![set(&p, &["a", "b", "c"]), set(&p, &["a", "c", "d"]), set(&p, &["a", "d", "e"])],
    );
    assert!(!is_coarse(&p, &tri).unwrap());
}

#[test]
fn refinement_examples() {
    let c = cfg(&fixtures::square());
    let d1 = Subdivision::new(c.all(), vec![set(&c, &["00", "10", "11"]), set(&c, &["00", "01", "11"])]);
    let d2 = Subdivision::new(c.all(), vec![set(&c, &["00", "10", "01"]), set(&c, &["10", "01", "11"])]);
    let triv = Subdivision::trivial(c.all());
    assert!(refines(&d1, &triv) && refines(&d2, &triv));
    assert!(!refines(&d1, &d2) && !refines(&d2, &d1));
    let t = cfg(&fixtures::triangle_with_interior_point());
    let small = Subdivision::new(t.all(), vec![set(&t, &["p1", "p2", "p3"])]);
    assert!(refines(&small, &Subdivision::trivial(t.all())));
    assert!(!refines(&Subdivision::trivial(t.all()), &small));
}

#[test]
fn triangulation_counts() {
    for (pc, n) in [
        (fixtures::square(), 2),
        (fixtures::convex_polygon(4), 2),
        (fixtures::pentagon(), 5),
        (fixtures::convex_polygon(5), 5),
        (fixtures::hexagon(), 14),
        (fixtures::convex_polygon(6), 14),
        (fixtures::triangle_with_interior_point(), 2),
        (fixtures::triangle(), 1),
    ] {
        let c = cfg(&pc);
        let ts = enumerate_regular_triangulations(&c, c.all(), 7);
        assert_eq!(ts.len(), n);
        assert_eq!(ts, brute_force_regular_triangulations(&c, c.all()));
        for t in &ts {
            assert!(t.is_triangulation(2));
            let psi = t.certificate.as_ref().unwrap();
            assert_eq!(&lower_hull_subdivision(&c, c.all(), psi), t);
        }
    }
}

#[test]
fn coarse_oracle_examples() {
    let c = cfg(&fixtures::square());
    assert_eq!(brute_force_coarse_subdivisions(&c, c.all()).len(), 2);
    let t = cfg(&fixtures::triangle_with_interior_point());
    let coarse = brute_force_coarse_subdivisions(&t, t.all());
    assert_eq!(coarse.len(), 2);
    assert!(coarse.contains(&Subdivision::new(t.all(), vec![set(&t, &["p1", "p2", "p3"])])));
    let s = cfg(&fixtures::triangle());
    assert!(brute_force_coarse_subdivisions(&s, s.all()).is_empty());
}

#[test]
fn three_dimensional_enumeration() {
    // bipyramid-like 5 points in R^3: one circuit, two triangulations
    let c = cfg(&fixtures::random_config(3, 5, 3, 5, false));
    let ts = enumerate_regular_triangulations(&c, c.all(), 0);
    assert_eq!(ts.len(), 2);
    assert_eq!(ts, brute_force_regular_triangulations(&c, c.all()));
}

fn flip_closed(c: &Config, ts: &[Subdivision]) -> bool {
    // every regular neighbour of a member is itself a member
    let set: std::collections::HashSet<&Subdivision> = ts.iter().collect();
    ts.iter().all(|t| {
        t.parent.subsets_of_size(c.dim() + 2).into_iter().all(|z| {
            let circ = c.circuit(z);
            [
                (circ.positive_triangulation(), circ.negative_triangulation()),
                (circ.negative_triangulation(), circ.positive_triangulation()),
            ]
            .into_iter()
            .all(|(from, to)| {
                if !from.iter().all(|s| t.cells().contains(s)) {
                    return true;
                }
                let mut cells: Vec<PointSet> = t.cells().iter().copied().filter(|s| !from.contains(s)).collect();
                cells.extend(to);
                let n = Subdivision::new(t.parent, cells);
                !is_regular(c, &n).unwrap().is_regular() || set.contains(&n)
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lower_hull_is_self_certifying(seed in 0u64..100_000, n in 4usize..=7) {
        let c = cfg(&fixtures::random_config(2, n, seed, 9, false));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // small lifts produce non-generic ties, exercising non-simplicial cells
        let psi: Vec<Rational> = (0..n).map(|_| int(rand::Rng::gen_range(&mut rng, 0..3))).collect();
        let s = lower_hull_subdivision(&c, c.all(), &psi);
        validate(&c, &s).unwrap();
        let r = is_regular(&c, &s).unwrap();
        prop_assert!(r.is_regular());
        if let Regularity::Regular(w) = r {
            prop_assert_eq!(lower_hull_subdivision(&c, c.all(), &w), s);
        }
    }

    #[test]
    fn flip_bfs_matches_oracle_planar(seed in 0u64..100_000, n in 4usize..=7) {
        let c = cfg(&fixtures::random_config(2, n, seed, 9, false));
        let ts = enumerate_regular_triangulations(&c, c.all(), seed);
        prop_assert_eq!(&ts, &brute_force_regular_triangulations(&c, c.all()));
        prop_assert!(flip_closed(&c, &ts));
    }

    #[test]
    fn flip_bfs_matches_oracle_spatial(seed in 0u64..100_000, n in 5usize..=6) {
        let c = cfg(&fixtures::random_config(3, n, seed, 6, false));
        let ts = enumerate_regular_triangulations(&c, c.all(), seed);
        prop_assert_eq!(&ts, &brute_force_regular_triangulations(&c, c.all()));
    }

    #[test]
    fn refinement_is_a_partial_order(seed in 0u64..100_000, n in 4usize..=6) {
        let c = cfg(&fixtures::random_config(2, n, seed, 9, false));
        let mut fam = enumerate_regular_triangulations(&c, c.all(), 0);
        fam.extend(brute_force_coarse_subdivisions(&c, c.all()));
        fam.push(Subdivision::trivial(c.all()));
        for a in &fam {
            prop_assert!(refines(a, a));
            for b in &fam {
                if a != b && refines(a, b) {
                    prop_assert!(!refines(b, a));
                }
                for x in &fam {
                    if refines(a, b) && refines(b, x) {
                        prop_assert!(refines(a, x));
                    }
                }
            }
        }
    }
}
