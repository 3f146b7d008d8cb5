//! End-to-end acceptance run: one PASS/FAIL line per criterion, budgets pinned below.
//! Exits nonzero when a criterion fails that is not listed in `KNOWN_FAILURES`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secpoly_cli::{run, Command, JobSpec};
use secpoly_core::coeff::{verify_q_squared, CoefficientSystem, DecoratedTables};
use secpoly_core::exactla::Rational;
use secpoly_core::fixtures;
use secpoly_core::geometry::{Config, PointConfig, PointSet};
use secpoly_core::io::{input_to_json, Input};
use secpoly_core::linfty::{
    build_structure_tables, marked_column_cohomology, verify_d_squared, StructureTables, Variant,
};
use secpoly_core::mc::{area_exponents, cocycle_lattice, is_mc, perturb, random_mc_element, McError, McModel};
use secpoly_core::relative::{
    attach_infinity, build_r_1d, build_r_infty, mixed_differential, verify_universality, UniversalityReport,
};
use secpoly_core::secondary::{
    build_secondary, build_secondary_of, verify_factorization, SecondaryCache, SecondaryPolytope,
};
use secpoly_core::subdivision::{brute_force_regular_triangulations, enumerate_regular_triangulations};

const DIMENSION_LAW_BUDGET: Duration = Duration::from_secs(120);
const D_SQUARED_BUDGET: Duration = Duration::from_secs(300);
const UNIVERSALITY_BUDGET: Duration = Duration::from_secs(600);
const MC_DRAWS: usize = 100;
const SEEDS: [u64; 3] = [11, 23, 37];

/// H(C⃗) carries an extra degree-0 class from additive weight cocycles, so the
/// quasi-isomorphism verdict is false on every tested configuration.
const KNOWN_FAILURES: &[usize] = &[10];

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into() }
    }
}

fn cfg(pc: &PointConfig) -> Config {
    Config::new(pc).expect("valid configuration")
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

/// The random general-position suite shared by criteria 1, 4, 5, 7 and 12.
fn suite() -> Vec<PointConfig> {
    let planar = (4..=8).flat_map(|n| SEEDS.map(|s| fixtures::random_config(2, n, s, 20, false)));
    let spatial = (5..=6).flat_map(|n| SEEDS.map(|s| fixtures::random_config(3, n, s, 12, false)));
    planar.chain(spatial).collect()
}

struct Built {
    config: Config,
    secondary: SecondaryPolytope,
}

fn dimension_law(suite: &[PointConfig]) -> (Verdict, Vec<Built>) {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut built = Vec::new();
    for pc in suite {
        let c = cfg(pc);
        let sp = build_secondary(&c, 0).expect("secondary polytope");
        let expected = c.len() - c.dim() - 1;
        if sp.dim != expected {
            bad.push(format!("{pc:?}: dim {} != {expected}", sp.dim));
        }
        built.push(Built { config: c, secondary: sp });
    }
    let elapsed = start.elapsed();
    let pass = bad.is_empty() && suite.len() >= 20 && elapsed <= DIMENSION_LAW_BUDGET;
    let detail = format!(
        "dim Σ = |A| - d - 1 on {} configurations, {} violations, {} (budget {})",
        suite.len(),
        bad.len(),
        secs(elapsed),
        secs(DIMENSION_LAW_BUDGET)
    );
    (Verdict::new(pass, detail), built)
}

fn is_segment(sp: &SecondaryPolytope) -> bool {
    sp.dim == 1 && sp.triangulations.len() == 2 && sp.f_vector() == [2, 1]
}

fn circuit_interval(built: &[Built]) -> Verdict {
    let mut configs: Vec<PointConfig> =
        vec![fixtures::line(3), fixtures::square(), fixtures::triangle_with_interior_point()];
    for d in 1..=3 {
        configs.extend(SEEDS.map(|s| fixtures::random_config(d, d + 2, s, 10, false)));
    }
    let mut checked = 0;
    let mut bad = 0;
    for pc in &configs {
        let c = cfg(pc);
        checked += 1;
        if !is_segment(&build_secondary(&c, 0).expect("secondary polytope")) {
            bad += 1;
        }
    }
    // general position makes every (d+2)-subset of the suite a circuit
    for b in built {
        let c = &b.config;
        for z in c.all().subsets_of_size(c.dim() + 2) {
            checked += 1;
            if !is_segment(&build_secondary_of(c, z, 0).expect("secondary polytope")) {
                bad += 1;
            }
        }
    }
    Verdict::new(bad == 0, format!("{checked} circuits, {bad} not a two-vertex segment"))
}

fn triangulation_counts() -> Verdict {
    let mut counts = Vec::new();
    let mut pass = true;
    for (pc, want) in [
        (fixtures::square(), 2),
        (fixtures::convex_polygon(4), 2),
        (fixtures::convex_polygon(5), 5),
        (fixtures::convex_polygon(6), 14),
    ] {
        let c = cfg(&pc);
        let bfs = enumerate_regular_triangulations(&c, c.all(), 0);
        let oracle = brute_force_regular_triangulations(&c, c.all());
        pass &= bfs.len() == want && bfs == oracle;
        counts.push(format!("{}/{}", bfs.len(), oracle.len()));
    }
    Verdict::new(pass, format!("flip BFS / brute force: {}", counts.join(", ")))
}

fn factorization(built: &[Built]) -> Verdict {
    let mut faces = 0;
    let mut bad = 0;
    for b in built {
        for i in 0..b.secondary.faces.len() {
            faces += 1;
            if !verify_factorization(&b.config, &b.secondary, i, 0).expect("factorization").holds() {
                bad += 1;
            }
        }
    }
    Verdict::new(bad == 0, format!("{faces} faces, {bad} failures"))
}

fn sorted(cells: &[PointSet]) -> Vec<PointSet> {
    let mut v = cells.to_vec();
    v.sort();
    v
}

fn q_squared(c: &Config, cs: &CoefficientSystem, t: &StructureTables) -> bool {
    DecoratedTables::new(c, cs, t).map(|dt| verify_q_squared(&dt, sorted).passes()).unwrap_or(false)
}

fn d_squared(built: &[Built]) -> Verdict {
    let start = Instant::now();
    let mut runs = 0;
    let mut bad = Vec::new();
    for (k, b) in built.iter().enumerate() {
        let c = &b.config;
        let random = CoefficientSystem::random(c, &mut ChaCha8Rng::seed_from_u64(k as u64));
        let max_dim = random.declared().map(|(_, s)| s.degrees.len()).max().unwrap_or(1);
        assert!(max_dim <= 2);
        for variant in [Variant::Marked, Variant::Geometric] {
            let t = build_structure_tables(c, variant, 0).expect("structure tables");
            let checks = [
                verify_d_squared(&t).passes(),
                q_squared(c, &CoefficientSystem::trivial(), &t),
                q_squared(c, &random, &t),
                q_squared(c, &random.clone().with_flipped_orientation(), &t),
            ];
            runs += checks.len();
            if checks.contains(&false) {
                bad.push(format!("config {k} {variant:?} {checks:?}"));
            }
        }
    }
    let elapsed = start.elapsed();
    Verdict::new(
        bad.is_empty() && elapsed <= D_SQUARED_BUDGET,
        format!(
            "{runs} checks over both variants with trivial and random coefficients, {} failures, {} (budget {})",
            bad.len(),
            secs(elapsed),
            secs(D_SQUARED_BUDGET)
        ),
    )
}

fn describe_support(c: &Config, t: &StructureTables) -> Vec<(Vec<String>, String)> {
    let mut out: Vec<_> =
        t.entries.iter().map(|e| (e.inputs.iter().map(|&b| c.describe(b)).collect(), c.describe(e.output))).collect();
    out.sort();
    out
}

fn support_entry(inputs: &[&str], output: &str) -> (Vec<String>, String) {
    (inputs.iter().map(|s| s.to_string()).collect(), output.to_string())
}

fn support_fidelity() -> Verdict {
    let sq = cfg(&fixtures::square());
    let g = build_structure_tables(&sq, Variant::Geometric, 0).expect("tables");
    let square_support = describe_support(&sq, &g)
        == [
            support_entry(&["{00,01,10}", "{01,10,11}"], "{00,01,10,11}"),
            support_entry(&["{00,01,11}", "{00,10,11}"], "{00,01,10,11}"),
        ];
    let square_dims = g.dims_by_degree() == BTreeMap::from([(1, 4), (2, 1)]);

    let tri = cfg(&fixtures::triangle_with_interior_point());
    let all = "{p1,p2,p3,q}";
    let g = build_structure_tables(&tri, Variant::Geometric, 0).expect("tables");
    let lambda3 = describe_support(&tri, &g) == [support_entry(&["{p1,p2,q}", "{p1,p3,q}", "{p2,p3,q}"], all)];
    let m = build_structure_tables(&tri, Variant::Marked, 0).expect("tables");
    let marked = describe_support(&tri, &m);
    let differential = marked.contains(&support_entry(&["{p1,p2,p3}"], all))
        && m.arity(1).all(|e| e.coefficient == one() || e.coefficient == -one());
    let marked_lambda3 = marked.contains(&support_entry(&["{p1,p2,q}", "{p1,p3,q}", "{p2,p3,q}"], all));
    let big = tri.set_of(&["p1", "p2", "p3"]).expect("labels");
    let column = marked_column_cohomology(&tri, &m, big).expect("column");
    let exact = column.expected_exact && column.exact;
    let checks = [square_support, square_dims, lambda3, differential, marked_lambda3, exact];
    Verdict::new(
        !checks.contains(&false),
        format!(
            "square brackets {square_support}, square dims (4,1) {square_dims}, λ3 {lambda3}, d(e_f) = ±e_A {differential}, marked λ3 {marked_lambda3}, column exact {exact}"
        ),
    )
}

fn mc_equivalence(built: &[Built]) -> Verdict {
    let mut draws = 0;
    let mut disagreements = 0;
    let mut forced_failures = 0;
    let mut area_failures = 0;
    let mut planar = 0;
    for (k, b) in built.iter().enumerate() {
        let c = &b.config;
        let t = build_structure_tables(c, Variant::Marked, 0).expect("tables");
        let lattice = cocycle_lattice(c);
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        for i in 0..MC_DRAWS {
            let model = if i % 4 < 2 { McModel::Multiplicative } else { McModel::Additive };
            let forced = random_mc_element(&lattice, model, &mut rng);
            let gamma = if i % 2 == 0 { forced } else { perturb(&forced, &mut rng) };
            draws += 1;
            match is_mc(c, &gamma, &t) {
                Ok(v) if i % 2 == 0 && !v.is_mc => forced_failures += 1,
                Ok(_) => {}
                Err(McError::Disagreement(_)) => disagreements += 1,
                Err(e) => panic!("mc evaluation: {e}"),
            }
        }
        if c.dim() == 2 {
            planar += 1;
            if !lattice.is_additive_cocycle(&area_exponents(c)) {
                area_failures += 1;
            }
        }
    }
    Verdict::new(
        disagreements == 0 && forced_failures == 0 && area_failures == 0,
        format!(
            "{draws} draws ({MC_DRAWS} per configuration), {disagreements} disagreements, {forced_failures} forced draws not MC; area cocycle fails on {area_failures} of {planar} planar configurations"
        ),
    )
}

fn line_algebra() -> Verdict {
    let mut pass = true;
    let mut sizes = Vec::new();
    for r in 3..=5 {
        let alg = build_r_1d(&fixtures::line(r)).expect("line algebra");
        let pairs: Vec<(usize, usize, i32)> = alg.elements.iter().map(|e| (e.left, e.right, e.degree)).collect();
        let expected: Vec<(usize, usize, i32)> =
            (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j, (j - i) as i32))).collect();
        pass &= pairs == expected;
        let index = |i: usize, j: usize| alg.elements.iter().position(|e| e.left == i && e.right == j);
        for (x, a) in alg.elements.iter().enumerate() {
            for (y, b) in alg.elements.iter().enumerate() {
                let want: Vec<(usize, Rational)> = if a.right == b.left {
                    vec![(index(a.left, b.right).expect("element"), one())]
                } else {
                    Vec::new()
                };
                pass &= alg.product(x, y) == want.as_slice();
            }
        }
        pass &= alg.associativity_failures().is_empty();
        sizes.push(format!("r={r}: {} elements", alg.dim()));
    }
    Verdict::new(pass, format!("strictly upper triangular tables, {}", sizes.join(", ")))
}

fn relative_configs() -> Vec<PointConfig> {
    let mut configs = vec![
        fixtures::triangle(),
        fixtures::sheared_square(),
        fixtures::triangle_with_interior_point_generic(),
        fixtures::convex_polygon(5),
    ];
    for n in 3..=5 {
        configs.extend(SEEDS.map(|s| fixtures::random_config(2, n, s, 6, true).without_infinity()));
    }
    configs
}

fn r_infty_structure() -> Verdict {
    let mut bad = 0;
    let mut higher = 0;
    let configs = relative_configs();
    for pc in &configs {
        let ic = attach_infinity(pc, fixtures::up()).expect("generic direction");
        let md = mixed_differential(&ic, &CoefficientSystem::trivial(), &SecondaryCache::new(&ic.config, 0))
            .expect("mixed differential");
        let dt = md.decorate(&ic).expect("decoration");
        let r = build_r_infty(&ic, &md, &dt).expect("algebra");
        higher += r.other_arities.range(3..).map(|(_, n)| n).sum::<usize>();
        if !r.associativity_failures().is_empty() || !r.other_arities.is_empty() {
            bad += 1;
        }
    }
    Verdict::new(
        bad == 0,
        format!(
            "{} configurations with ∞, {bad} non-associative or with extra arities, {higher} operations of arity ≥ 3",
            configs.len()
        ),
    )
}

fn universality_configs() -> Vec<(&'static str, PointConfig)> {
    vec![
        ("3 points", fixtures::triangle()),
        ("convex 4-gon", fixtures::sheared_square()),
        ("triangle + interior point", fixtures::triangle_with_interior_point_generic()),
        ("random |A| = 5", fixtures::random_config(2, 5, 7, 6, true).without_infinity()),
    ]
}

fn universality_reports() -> Vec<(&'static str, UniversalityReport, Duration)> {
    universality_configs()
        .into_iter()
        .map(|(name, pc)| {
            let start = Instant::now();
            let ic = attach_infinity(&pc, fixtures::up()).expect("generic direction");
            let report = verify_universality(&ic, &CoefficientSystem::trivial(), 0).expect("universality");
            (name, report, start.elapsed())
        })
        .collect()
}

fn universality(reports: &[(&str, UniversalityReport, Duration)]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, r, elapsed) in reports {
        pass &= r.lands_in_directed && r.chain_map && r.quasi_iso && *elapsed <= UNIVERSALITY_BUDGET;
        parts.push(format!(
            "{name}: directed {}, chain map {}, quasi-iso {}, mismatched degrees {:?}, H = {:?} vs dim g = {:?}, {}",
            r.lands_in_directed,
            r.chain_map,
            r.quasi_iso,
            r.mismatched_degrees,
            r.hochschild_betti,
            r.g_dims,
            secs(*elapsed)
        ));
    }
    Verdict::new(pass, format!("budget {} each; {}", secs(UNIVERSALITY_BUDGET), parts.join("; ")))
}

/// The failure of criterion 10 must be the cohomology count alone: Ψ₁ is still a
/// degree-preserving chain map into the directed subcomplex, injective on cohomology.
fn universality_failure_is_isolated(reports: &[(&str, UniversalityReport, Duration)]) -> bool {
    reports.iter().all(|(_, r, _)| r.structure_holds() && r.induced_ranks == r.g_dims && r.mismatched_degrees == [0])
}

fn filtration(reports: &[(&str, UniversalityReport, Duration)]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, r, _) in reports {
        let f = &r.filtration;
        let ok = f.passes() && f.gr0_quasi_iso;
        pass &= ok;
        parts.push(format!(
            "{name}: strict chains {}, filtration {}, convex gr0 image {}, gr0 quasi-iso {}",
            f.preserves_strict_chains, f.preserves_filtration, f.gr0_image_is_convex, f.gr0_quasi_iso
        ));
    }
    Verdict::new(pass, parts.join("; "))
}

fn determinism(suite: &[PointConfig]) -> Verdict {
    let mut runs = 0;
    let mut differ = Vec::new();
    for (k, pc) in suite.iter().enumerate() {
        let input = Input { config: pc.clone(), coefficients: None };
        let text = serde_json::to_string_pretty(&input_to_json(&input)).expect("serializable");
        for command in [Command::Triangulations, Command::Secondary, Command::Linfty, Command::Mc] {
            let outcomes: Vec<_> = [1, 4]
                .map(|jobs| {
                    let mut spec = JobSpec::new(command, text.clone());
                    spec.seed = 5;
                    spec.jobs = jobs;
                    run(&spec)
                })
                .into_iter()
                .collect();
            runs += 1;
            let same = outcomes[0].output.is_some()
                && outcomes[0].output == outcomes[1].output
                && outcomes[0].status == outcomes[1].status;
            if !same {
                differ.push(format!("config {k} {}", command.name()));
            }
        }
    }
    Verdict::new(
        differ.is_empty(),
        format!("{runs} command runs with --jobs 1 and 4, {} differ {differ:?}", differ.len()),
    )
}

fn main() -> ExitCode {
    let suite = suite();
    let mut verdicts: Vec<(usize, &str, Verdict)> = Vec::new();
    let (v, built) = dimension_law(&suite);
    verdicts.push((1, "dimension law", v));
    verdicts.push((2, "circuit interval", circuit_interval(&built)));
    verdicts.push((3, "triangulation counts", triangulation_counts()));
    verdicts.push((4, "factorization", factorization(&built)));
    verdicts.push((5, "d² = 0", d_squared(&built)));
    verdicts.push((6, "support fidelity", support_fidelity()));
    verdicts.push((7, "MC equivalence", mc_equivalence(&built)));
    verdicts.push((8, "1D algebra", line_algebra()));
    verdicts.push((9, "R∞ structure", r_infty_structure()));
    let reports = universality_reports();
    verdicts.push((10, "universality", universality(&reports)));
    verdicts.push((11, "filtration diagnostics", filtration(&reports)));
    verdicts.push((12, "determinism", determinism(&suite)));

    let mut unexpected = Vec::new();
    for (n, name, v) in &verdicts {
        println!("criterion {n:>2} {} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass && !KNOWN_FAILURES.contains(n) {
            unexpected.push(*n);
        }
    }
    if !universality_failure_is_isolated(&reports) {
        println!("criterion 10 failure is not confined to the degree-0 count");
        unexpected.push(10);
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
