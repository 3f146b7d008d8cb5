use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use secpoly_core::exactla::*;

fn q(n: i64) -> Rational {
    int(n)
}

fn qv(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| q(x)).collect()
}

#[test]
fn rank_examples() {
    assert_eq!(MatrixQ::identity(2).rank(), 2);
    assert_eq!(MatrixQ::zeros(3, 4).rank(), 0);
    assert_eq!(MatrixQ::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
}

#[test]
fn kernel_examples() {
    assert!(MatrixQ::identity(3).kernel_basis().is_empty());
    let k = MatrixQ::from_i64(&[&[1, -1]]).kernel_basis();
    assert_eq!(k, vec![qv(&[1, 1])]);
    let circuit = MatrixQ::from_i64(&[&[1, 1, -1, -1]]);
    let k = circuit.kernel_basis();
    assert_eq!(k.len(), 3);
    for v in &k {
        assert!(circuit.mul_vec(v).iter().all(Zero::is_zero));
    }
}

#[test]
fn rational_round_trip() {
    for s in ["0", "-3", "7/2", "-1/3", "1234567890123456789012345678901/2"] {
        assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
    }
    assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
    assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
    assert!(parse_rational("1/0").is_err());
    assert!(parse_rational("1.5").is_err());
    assert!(parse_rational("").is_err());
}

#[test]
fn lp_open_interval() {
    let out =
        lp_strict_feasible(1, &[], &[LinearConstraint::new(qv(&[1]), q(0)), LinearConstraint::new(qv(&[-1]), q(-1))])
            .unwrap();
    let w = out.witness().expect("feasible");
    assert!(w[0] > q(0) && w[0] < q(1));
}

#[test]
fn lp_contradiction() {
    let out =
        lp_strict_feasible(1, &[], &[LinearConstraint::new(qv(&[1]), q(0)), LinearConstraint::new(qv(&[-1]), q(0))])
            .unwrap();
    assert_eq!(out, LpOutcome::Infeasible);
}

#[test]
fn lp_square_diagonal_folding() {
    // points (0,0),(1,0),(1,1),(0,1) as psi_0..psi_3; triangles {0,1,2} and {0,2,3}
    // each cell's affine piece is fixed by psi on its vertices; strictness: the point
    // opposite across the diagonal lies strictly above the other cell's plane.
    // plane of {0,1,2} at (0,1) is psi0 - psi1 + psi2, so psi3 > psi0 - psi1 + psi2.
    let strict = vec![LinearConstraint::new(qv(&[-1, 1, -1, 1]), q(0))];
    let out = lp_strict_feasible(4, &[], &strict).unwrap();
    let w = out.witness().unwrap();
    assert!(strict[0].value(w) > q(0));
    // the hand lift 0,1,0,1 satisfies it as well
    assert_eq!(strict[0].value(&qv(&[0, 1, 0, 1])), q(2));
}

#[test]
fn lp_with_equalities() {
    // x + y = 1, x > 1/3, y > 1/3
    let eq = vec![LinearConstraint::new(qv(&[1, 1]), q(1))];
    let st = vec![LinearConstraint::new(qv(&[1, 0]), rat(1, 3)), LinearConstraint::new(qv(&[0, 1]), rat(1, 3))];
    let w = lp_strict_feasible(2, &eq, &st).unwrap().witness().unwrap().to_vec();
    assert_eq!(&w[0] + &w[1], q(1));
    assert!(w[0] > rat(1, 3) && w[1] > rat(1, 3));
    // x + y = 1, x > 1/2, y > 1/2 is infeasible
    let st = vec![LinearConstraint::new(qv(&[1, 0]), rat(1, 2)), LinearConstraint::new(qv(&[0, 1]), rat(1, 2))];
    assert_eq!(lp_strict_feasible(2, &eq, &st).unwrap(), LpOutcome::Infeasible);
}

#[test]
fn lp_inconsistent_equalities() {
    let eq = vec![LinearConstraint::new(qv(&[1]), q(0)), LinearConstraint::new(qv(&[1]), q(1))];
    assert_eq!(lp_strict_feasible(1, &eq, &[]).unwrap(), LpOutcome::Infeasible);
    let eq = vec![LinearConstraint::new(qv(&[1, 1]), q(2))];
    assert!(lp_strict_feasible(2, &eq, &[]).unwrap().is_feasible());
}

#[test]
fn simplex_basic_optimum() {
    // max x + y, x + 2y <= 4, 3x + y <= 6
    let a = vec![qv(&[1, 2]), qv(&[3, 1])];
    let r = simplex_max(&a, &qv(&[4, 6]), &qv(&[1, 1]));
    assert_eq!(r, SimplexResult::Optimal { value: rat(14, 5), x: vec![rat(8, 5), rat(6, 5)] });
    let r = simplex_max(&[qv(&[1, -1])], &qv(&[1]), &qv(&[0, 1]));
    assert_eq!(r, SimplexResult::Unbounded);
}

fn labels(n: usize, tag: &str) -> Vec<String> {
    (0..n).map(|i| format!("{tag}{i}")).collect()
}

fn complex(dims: &[(i32, usize)], diffs: Vec<(i32, MatrixQ)>) -> ChainComplexQ {
    let basis: BTreeMap<i32, Vec<String>> = dims.iter().map(|&(k, n)| (k, labels(n, &format!("c{k}_")))).collect();
    ChainComplexQ::new(basis, diffs.into_iter().collect()).unwrap()
}

#[test]
fn cohomology_identity_complex_is_exact() {
    let c = complex(&[(0, 1), (1, 1)], vec![(0, MatrixQ::identity(1))]);
    let h = cohomology(&c).unwrap();
    assert!(h.betti.values().all(|&b| b == 0));
}

#[test]
fn cohomology_zero_differential() {
    let c = complex(&[(0, 2), (1, 3), (2, 1)], vec![]);
    let h = cohomology(&c).unwrap();
    assert_eq!(h.betti, BTreeMap::from([(0, 2), (1, 3), (2, 1)]));
    assert_eq!(h.representatives[&1].len(), 3);
}

#[test]
fn augmented_cochain_complex_of_a_segment_is_exact() {
    // k -> k^2 -> k (empty face, two vertices, the edge)
    let d0 = MatrixQ::from_i64(&[&[1], &[1]]);
    let d1 = MatrixQ::from_i64(&[&[1, -1]]);
    let c = complex(&[(-1, 1), (0, 2), (1, 1)], vec![(-1, d0), (0, d1)]);
    assert!(c.betti_numbers().values().all(|&b| b == 0));
}

#[test]
fn non_complex_rejected() {
    let basis = BTreeMap::from([(0, labels(1, "a")), (1, labels(1, "b")), (2, labels(1, "c"))]);
    let d = BTreeMap::from([(0, MatrixQ::identity(1)), (1, MatrixQ::identity(1))]);
    assert_eq!(ChainComplexQ::new(basis, d).unwrap_err(), ExactLaError::NotComplex(0));
}

#[test]
fn quasi_iso_identity_and_zero() {
    let c = complex(&[(0, 2), (1, 2)], vec![(0, MatrixQ::from_i64(&[&[1, 1], &[0, 0]]))]);
    let id: BTreeMap<i32, MatrixQ> = [(0, MatrixQ::identity(2)), (1, MatrixQ::identity(2))].into();
    let r = is_quasi_iso(&id, &c, &c).unwrap();
    assert!(r.is_quasi_iso);
    assert_eq!(r.source_betti, BTreeMap::from([(0, 1), (1, 1)]));
    let r = is_quasi_iso(&BTreeMap::new(), &c, &c).unwrap();
    assert!(!r.is_quasi_iso);
}

#[test]
fn non_chain_map_rejected() {
    let s = complex(&[(0, 1), (1, 1)], vec![(0, MatrixQ::identity(1))]);
    let t = complex(&[(0, 1), (1, 1)], vec![]);
    let f: BTreeMap<i32, MatrixQ> = [(0, MatrixQ::identity(1)), (1, MatrixQ::identity(1))].into();
    assert_eq!(is_quasi_iso(&f, &s, &t).unwrap_err(), ExactLaError::NotChainMap(0));
}

#[test]
fn quasi_iso_inclusion_of_cohomology() {
    // target: k -> k^2 -> k with d0 = (1,0)^T, d1 = 0; cohomology (0, 1 in deg 1?, ...)
    let t = complex(&[(0, 1), (1, 2)], vec![(0, MatrixQ::from_i64(&[&[1], &[0]]))]);
    let s = complex(&[(1, 1)], vec![]);
    let good: BTreeMap<i32, MatrixQ> = [(1, MatrixQ::from_i64(&[&[0], &[1]]))].into();
    assert!(is_quasi_iso(&good, &s, &t).unwrap().is_quasi_iso);
    let bad: BTreeMap<i32, MatrixQ> = [(1, MatrixQ::from_i64(&[&[1], &[0]]))].into();
    assert!(!is_quasi_iso(&bad, &s, &t).unwrap().is_quasi_iso);
}

#[test]
fn determinant_examples() {
    assert_eq!(determinant(&[qv(&[1, 2]), qv(&[3, 4])]), q(-2));
    assert_eq!(determinant_sign(&[qv(&[1, 0, 0]), qv(&[1, 1, 0]), qv(&[1, 0, 1])]), 1);
    assert_eq!(determinant(&[qv(&[1, 2]), qv(&[2, 4])]), q(0));
}

#[test]
fn hull_of_square_and_triangle_with_interior_point() {
    let pts: Vec<Vec<Rational>> = [[0, 0], [1, 0], [1, 1], [0, 1]].iter().map(|p| qv(p)).collect();
    let f = convex_hull_facets(&pts).unwrap();
    let inc: Vec<Vec<usize>> = f.iter().map(|x| x.incident.ones().collect()).collect();
    assert_eq!(inc, vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]);
    let pts: Vec<Vec<Rational>> = [[0, 0], [3, 0], [0, 3], [1, 1]].iter().map(|p| qv(p)).collect();
    let f = convex_hull_facets(&pts).unwrap();
    assert_eq!(f.len(), 3);
    assert!(f.iter().all(|x| !x.incident.contains(3)));
    let seg: Vec<Vec<Rational>> = vec![qv(&[2]), qv(&[5])];
    let f = convex_hull_facets(&seg).unwrap();
    assert_eq!(f.len(), 2);
    assert!(convex_hull_facets(&[qv(&[0, 0]), qv(&[1, 1]), qv(&[2, 2])]).is_err());
}

#[test]
fn integer_kernel_of_circuit_row() {
    let a = vec![vec![BigInt::from(1), 1.into(), (-1).into(), (-1).into()]];
    let k = integer_kernel_basis(&a, 4);
    assert_eq!(k.len(), 3);
    let a2 = vec![vec![BigInt::from(2), 4.into()]];
    let k2 = integer_kernel_basis(&a2, 2);
    assert_eq!(k2.len(), 1);
    assert_eq!(k2[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![BigInt::from(2), 1.into()]);
}

// ---------- oracles ----------

/// Fourier-Motzkin feasibility for `a x > b` (strict) and `a x >= b` rows.
fn fm_feasible(mut rows: Vec<(Vec<Rational>, Rational, bool)>, nvars: usize) -> bool {
    for j in 0..nvars {
        let (mut lower, mut upper, mut rest) = (vec![], vec![], vec![]);
        for r in rows {
            if r.0[j].is_positive() {
                lower.push(r);
            } else if r.0[j].is_negative() {
                upper.push(r);
            } else {
                rest.push(r);
            }
        }
        for (la, lb, ls) in &lower {
            for (ua, ub, us) in &upper {
                let cl = -ua[j].clone();
                let cu = la[j].clone();
                let a: Vec<Rational> = la.iter().zip(ua).map(|(x, y)| x * &cl + y * &cu).collect();
                let b = lb * &cl + ub * &cu;
                rest.push((a, b, *ls || *us));
            }
        }
        rows = rest;
    }
    rows.iter().all(|(_, b, strict)| if *strict { b.is_negative() } else { !b.is_positive() })
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn matrix_strategy(max_r: usize, max_c: usize) -> impl Strategy<Value = MatrixQ> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(prop_oneof![3 => Just(q(0)), 2 => small_rat()], c), r)
            .prop_map(move |d| MatrixQ::from_dense(r, c, &d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_plus_nullity(m in matrix_strategy(6, 7)) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.len(), m.cols());
        prop_assert_eq!(m.rank(), m.rref().pivots.len());
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn lp_agrees_with_fourier_motzkin(
        nvars in 1usize..=4,
        seed in proptest::collection::vec((proptest::collection::vec(-3i64..=3, 4), -3i64..=3), 1..6),
        eqs in proptest::collection::vec((proptest::collection::vec(-2i64..=2, 4), -2i64..=2), 0..2),
    ) {
        let strict: Vec<LinearConstraint> = seed.iter()
            .map(|(a, b)| LinearConstraint::new(qv(&a[..nvars]), q(*b))).collect();
        let equalities: Vec<LinearConstraint> = eqs.iter()
            .map(|(a, b)| LinearConstraint::new(qv(&a[..nvars]), q(*b))).collect();
        let out = lp_strict_feasible(nvars, &equalities, &strict).unwrap();
        if let Some(w) = out.witness() {
            for c in &strict { prop_assert!(c.value(w) > c.rhs); }
            for c in &equalities { prop_assert_eq!(c.value(w), c.rhs.clone()); }
        }
        let mut rows: Vec<(Vec<Rational>, Rational, bool)> =
            strict.iter().map(|c| (c.coeffs.clone(), c.rhs.clone(), true)).collect();
        for c in &equalities {
            rows.push((c.coeffs.clone(), c.rhs.clone(), false));
            rows.push((c.coeffs.iter().map(|x| -x).collect(), -c.rhs.clone(), false));
        }
        prop_assert_eq!(out.is_feasible(), fm_feasible(rows, nvars));
    }

    #[test]
    fn euler_characteristic_matches_betti(
        a in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 3),
        b in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 2),
    ) {
        // d0 = A (3x3), then take d1 as a basis of the left kernel of A so d1 d0 = 0
        let d0 = MatrixQ::from_dense(3, 3, &a.iter().map(|r| qv(r)).collect::<Vec<_>>());
        let left = d0.transpose().kernel_basis();
        let d1 = if left.is_empty() { MatrixQ::zeros(2, 3) } else {
            let mut m = MatrixQ::zeros(2, 3);
            for (i, row) in b.iter().enumerate() {
                for (j, coeff) in row.iter().enumerate().take(left.len()) {
                    for (c, v) in left[j].iter().enumerate() { m.add_to(i, c, &(v * q(*coeff))); }
                }
            }
            m
        };
        let c = complex(&[(0, 3), (1, 3), (2, 2)], vec![(0, d0), (1, d1)]);
        let betti = c.betti_numbers();
        let chi: i64 = betti.iter().map(|(&k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) }).sum();
        prop_assert_eq!(chi, c.euler_characteristic());
        let h = cohomology(&c).unwrap();
        prop_assert_eq!(h.betti, betti);
    }

    #[test]
    fn hull_matches_brute_force(pts in proptest::collection::vec((-5i64..=5, -5i64..=5, -5i64..=5), 4..9)) {
        let pts: Vec<Vec<Rational>> = pts.iter().map(|&(x, y, z)| qv(&[x, y, z])).collect();
        let Ok(facets) = convex_hull_facets(&pts) else { return Ok(()); };
        let brute = brute_facets(&pts);
        let got: Vec<Vec<usize>> = facets.iter().map(|f| f.incident.ones().collect()).collect();
        prop_assert_eq!(got, brute);
        for f in &facets {
            for (i, p) in pts.iter().enumerate() {
                let v: Rational = f.normal.iter().zip(p).map(|(a, x)| Rational::from_integer(a.clone()) * x)
                    .fold(q(0), |s, t| s + t) - Rational::from_integer(f.offset.clone());
                prop_assert!(!v.is_negative());
                prop_assert_eq!(v.is_zero(), f.incident.contains(i));
            }
        }
    }

    #[test]
    fn integer_kernel_is_saturated_basis(a in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 5), 1..4)) {
        let ai: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let basis = integer_kernel_basis(&ai, 5);
        let m = MatrixQ::from_dense(a.len(), 5, &a.iter().map(|r| qv(r)).collect::<Vec<_>>());
        prop_assert_eq!(basis.len(), 5 - m.rank());
        for v in &basis {
            for row in &ai {
                prop_assert!(row.iter().zip(v).fold(BigInt::zero(), |s, (x, y)| s + x * y).is_zero());
            }
        }
        // every primitive rational kernel vector is an integer combination of the basis
        let bq: Vec<Vec<Rational>> = basis.iter().map(|v| v.iter().cloned().map(Rational::from_integer).collect()).collect();
        for kv in m.kernel_basis() {
            let target: Vec<Rational> = primitive_integer(&kv).into_iter().map(Rational::from_integer).collect();
            // solve B^T c = target
            let mut rows: Vec<Vec<Rational>> = (0..5).map(|i| {
                let mut r: Vec<Rational> = bq.iter().map(|b| b[i].clone()).collect();
                r.push(target[i].clone());
                r
            }).collect();
            rows = rref_dense(rows, bq.len() + 1).rows;
            for r in &rows {
                prop_assert!(r.last().unwrap().is_integer());
            }
        }
    }
}

fn brute_facets(pts: &[Vec<Rational>]) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    let mut out = std::collections::BTreeSet::new();
    for tri in (0..pts.len()).combinations(3) {
        // normal = (p1-p0) x (p2-p0)
        let u: Vec<Rational> = (0..3).map(|i| &pts[tri[1]][i] - &pts[tri[0]][i]).collect();
        let v: Vec<Rational> = (0..3).map(|i| &pts[tri[2]][i] - &pts[tri[0]][i]).collect();
        let n = [&u[1] * &v[2] - &u[2] * &v[1], &u[2] * &v[0] - &u[0] * &v[2], &u[0] * &v[1] - &u[1] * &v[0]];
        if n.iter().all(Zero::is_zero) {
            continue;
        }
        let vals: Vec<Rational> =
            pts.iter().map(|p| (0..3).fold(q(0), |s, i| s + &n[i] * (&p[i] - &pts[tri[0]][i]))).collect();
        if vals.iter().all(|x| !x.is_negative()) || vals.iter().all(|x| !x.is_positive()) {
            out.insert((0..pts.len()).filter(|&i| vals[i].is_zero()).collect::<Vec<_>>());
        }
    }
    out.into_iter().collect()
}

#[test]
fn kronecker_product() {
    let a = MatrixQ::from_i64(&[&[1, 2], &[0, 3]]);
    let b = MatrixQ::from_i64(&[&[0, 1], &[1, 0]]);
    let k = a.kron(&b);
    assert_eq!(k.rows(), 4);
    assert_eq!(k.get(1, 0), q(1));
    assert_eq!(k.get(0, 3), q(2));
    assert_eq!(k.get(3, 2), q(3));
    assert_eq!(k.nnz(), 6);
    // (A ⊗ B)(C ⊗ D) = AC ⊗ BD
    let lhs = k.mul(&b.kron(&a)).unwrap();
    let rhs = a.mul(&b).unwrap().kron(&b.mul(&a).unwrap());
    assert_eq!(lhs, rhs);
}
