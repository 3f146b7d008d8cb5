use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use secpoly_core::coeff::{verify_q_squared, CoefficientSystem, DecoratedTables};
use secpoly_core::exactla::format_rational;
use secpoly_core::geometry::{
    check_general_position, full_dimensional_markings, Config, GeneralPositionReport, LabeledPoint, PointConfig,
};
use secpoly_core::io::{
    coefficient_system, labels, rational_strings, subdivision_to_json, tables_to_json, EntryJson, SubdivisionJson,
};
use secpoly_core::linfty::{build_structure_tables, verify_d_squared, Variant};
use secpoly_core::mc::{
    area_exponents, circuit_equations, cocycle_lattice, is_mc, perturb, random_mc_element, McError, McModel,
};
use secpoly_core::relative::{
    attach_infinity, build_r_1d, build_r_infty, extract_psi, mixed_differential, one_finite_from_secondary,
    one_finite_subdivisions, verify_universality, InfinityConfig, TriangularAlgebra, UniversalityReport,
};
use secpoly_core::secondary::{
    build_secondary, dual_web, face_lattice_dot, verify_factorization, web_dot, SecondaryCache, SecondaryPolytope,
};
use secpoly_core::subdivision::{
    brute_force_coarse_subdivisions, brute_force_regular_triangulations, enumerate_regular_triangulations, Subdivision,
};

use crate::{internal, invalid, Artifact, CliError, Command, Context, Format, Status};

pub(crate) fn dispatch(ctx: &Context) -> Result<Artifact, CliError> {
    match ctx.spec.command {
        Command::Check => Ok(check(ctx)),
        Command::Triangulations => triangulations(ctx),
        Command::Secondary => secondary(ctx),
        Command::Linfty => linfty(ctx),
        Command::Mc => mc(ctx),
        Command::RelativeR => relative_r(ctx),
        Command::RelativePsi => relative_psi(ctx),
        Command::Universality => universality(ctx),
        Command::WebExport => web_export(ctx),
    }
}

fn json_only(ctx: &Context) -> Result<(), CliError> {
    match ctx.spec.format {
        Format::Json => Ok(()),
        Format::Dot => Err(invalid(format!("{} has no DOT export", ctx.spec.command.name()))),
    }
}

fn finite_config(ctx: &Context) -> Result<Config, CliError> {
    Config::new(&ctx.finite()).map_err(invalid)
}

fn coefficients(ctx: &Context, c: &Config) -> Result<CoefficientSystem, CliError> {
    let cs = coefficient_system(c, ctx.input.coefficients.as_ref()).map_err(invalid)?;
    Ok(if ctx.spec.flip_orientation { cs.with_flipped_orientation() } else { cs })
}

#[derive(Serialize)]
struct CheckReport {
    dimension: usize,
    points: usize,
    general_position: GeneralPositionReport,
}

fn check(ctx: &Context) -> Artifact {
    let pc = &ctx.input.config;
    let report = CheckReport { dimension: pc.dim(), points: pc.len(), general_position: check_general_position(pc) };
    let passes = report.general_position.passes;
    Artifact::json(report).check(passes, Status::ValidationFailure, "input is not in general position")
}

#[derive(Serialize)]
struct TriangulationJson {
    cells: Vec<Vec<String>>,
    gkz: Vec<String>,
}

#[derive(Serialize)]
struct OracleCount {
    count: usize,
    agrees: bool,
}

#[derive(Serialize)]
struct TriangulationsReport {
    count: usize,
    triangulations: Vec<TriangulationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleCount>,
}

fn cell_lists(c: &Config, s: &Subdivision) -> Vec<Vec<String>> {
    s.cells().iter().map(|&b| labels(c, b)).collect()
}

fn triangulations(ctx: &Context) -> Result<Artifact, CliError> {
    let c = finite_config(ctx)?;
    let seed = ctx.spec.seed;
    if ctx.spec.format == Format::Dot {
        let sp = build_secondary(&c, seed).map_err(internal)?;
        return Ok(Artifact::dot(flip_graph_dot(&c, &sp)));
    }
    let found = enumerate_regular_triangulations(&c, c.all(), seed);
    let gkz = |t: &Subdivision| rational_strings(&secpoly_core::secondary::gkz_vector(&c, t));
    let oracle = ctx.spec.oracle.then(|| {
        let brute = brute_force_regular_triangulations(&c, c.all());
        let key = |ts: &[Subdivision]| ts.iter().map(|t| t.cells().to_vec()).collect::<BTreeSet<_>>();
        OracleCount { count: brute.len(), agrees: key(&brute) == key(&found) }
    });
    let agrees = oracle.as_ref().is_none_or(|o| o.agrees);
    let report = TriangulationsReport {
        count: found.len(),
        triangulations: found.iter().map(|t| TriangulationJson { cells: cell_lists(&c, t), gkz: gkz(t) }).collect(),
        oracle,
    };
    Ok(Artifact::json(report).check(
        agrees,
        Status::InvariantFailure,
        "flip enumeration disagrees with the brute-force oracle",
    ))
}

/// Regular triangulations joined along the edges of Σ(A).
fn flip_graph_dot(c: &Config, sp: &SecondaryPolytope) -> String {
    let mut out = String::from("graph flips {\n");
    for (i, t) in sp.triangulations.iter().enumerate() {
        let _ = writeln!(out, "  t{i} [label=\"{}\"];", t.describe(c));
    }
    for (_, f) in sp.faces_of_dim(1) {
        let ends: Vec<usize> = f.vertices.ones().collect();
        if let [a, b] = ends[..] {
            let _ = writeln!(out, "  t{a} -- t{b} [label=\"{}\"];", f.subdivision.describe(c));
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct FaceJson {
    dim: usize,
    cells: Vec<Vec<String>>,
    geometric: bool,
    children: Vec<usize>,
    parents: Vec<usize>,
}

#[derive(Serialize)]
struct SecondaryOracle {
    factorization_faces: usize,
    factorization_holds: bool,
    coarse_matches_brute_force: bool,
}

#[derive(Serialize)]
struct SecondaryReport {
    dim: usize,
    expected_dim: usize,
    f_vector: Vec<usize>,
    vertices: Vec<TriangulationJson>,
    coarse_subdivisions: Vec<Vec<Vec<String>>>,
    faces: Vec<FaceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<SecondaryOracle>,
}

fn coarse_key(list: &[Subdivision]) -> BTreeSet<Vec<secpoly_core::geometry::PointSet>> {
    list.iter().map(|s| s.cells().to_vec()).collect()
}

fn secondary(ctx: &Context) -> Result<Artifact, CliError> {
    let c = finite_config(ctx)?;
    let seed = ctx.spec.seed;
    let sp = build_secondary(&c, seed).map_err(internal)?;
    if ctx.spec.format == Format::Dot {
        return Ok(Artifact::dot(face_lattice_dot(&c, &sp)));
    }
    let expected_dim = c.len() - c.dim() - 1;
    let oracle = if ctx.spec.oracle {
        let mut holds = true;
        for face in 0..sp.faces.len() {
            holds &= verify_factorization(&c, &sp, face, seed).map_err(internal)?.holds();
        }
        Some(SecondaryOracle {
            factorization_faces: sp.faces.len(),
            factorization_holds: holds,
            coarse_matches_brute_force: coarse_key(&sp.coarse_subdivisions())
                == coarse_key(&brute_force_coarse_subdivisions(&c, c.all())),
        })
    } else {
        None
    };
    let oracle_ok = oracle.as_ref().is_none_or(|o| o.factorization_holds && o.coarse_matches_brute_force);
    let report = SecondaryReport {
        dim: sp.dim,
        expected_dim,
        f_vector: sp.f_vector(),
        vertices: sp
            .triangulations
            .iter()
            .zip(&sp.gkz)
            .map(|(t, g)| TriangulationJson { cells: cell_lists(&c, t), gkz: rational_strings(g) })
            .collect(),
        coarse_subdivisions: sp.coarse_subdivisions().iter().map(|s| cell_lists(&c, s)).collect(),
        faces: sp
            .faces
            .iter()
            .map(|f| FaceJson {
                dim: f.dim,
                cells: cell_lists(&c, &f.subdivision),
                geometric: f.geometric,
                children: f.children.clone(),
                parents: f.parents.clone(),
            })
            .collect(),
        oracle,
    };
    Ok(Artifact::json(report)
        .check(sp.dim == expected_dim, Status::InvariantFailure, "dim Σ(A) differs from |A| − d − 1")
        .check(oracle_ok, Status::InvariantFailure, "oracle cross-check failed"))
}

#[derive(Serialize)]
struct GeneratorJson {
    marking: Vec<String>,
    degree: i64,
    geometric: bool,
}

#[derive(Serialize)]
struct LinftyReport {
    variant: &'static str,
    coefficients: &'static str,
    flipped_orientation: bool,
    generators: Vec<GeneratorJson>,
    dims_by_degree: BTreeMap<i64, usize>,
    d_squared: bool,
    entries: Vec<EntryJson>,
}

fn linfty(ctx: &Context) -> Result<Artifact, CliError> {
    json_only(ctx)?;
    let c = finite_config(ctx)?;
    let variant = if ctx.spec.geometric_only { Variant::Geometric } else { Variant::Marked };
    let t = build_structure_tables(&c, variant, ctx.spec.seed).map_err(internal)?;
    let cs = coefficients(ctx, &c)?;
    let decorated = !cs.is_trivial() || cs.flipped;
    let (d_squared, entries) = if decorated {
        let dt = DecoratedTables::new(&c, &cs, &t).map_err(internal)?;
        let ok = verify_q_squared(&dt, |cells: &[_]| {
            let mut v = cells.to_vec();
            v.sort();
            v
        })
        .passes();
        (ok, tables_to_json(&c, &t, |i| Some(dt.entry_matrix(i))))
    } else {
        (verify_d_squared(&t).passes(), tables_to_json(&c, &t, |_| None))
    };
    let report = LinftyReport {
        variant: if variant == Variant::Geometric { "geometric" } else { "marked" },
        coefficients: if decorated { "decorated" } else { "trivial" },
        flipped_orientation: cs.flipped,
        generators: t
            .generators
            .iter()
            .map(|g| GeneratorJson { marking: labels(&c, g.marking), degree: g.degree(), geometric: g.geometric })
            .collect(),
        dims_by_degree: t.dims_by_degree(),
        d_squared,
        entries,
    };
    Ok(Artifact::json(report).check(d_squared, Status::InvariantFailure, "D² ≠ 0"))
}

#[derive(Serialize)]
struct EquationJson {
    support: Vec<String>,
    positive: Vec<String>,
    negative: Vec<String>,
    left: Vec<u8>,
    right: Vec<u8>,
}

#[derive(Serialize)]
struct DrawSummary {
    total: usize,
    maurer_cartan: usize,
    not_maurer_cartan: usize,
    verdicts_agree: bool,
}

#[derive(Serialize)]
struct McReport {
    simplices: Vec<Vec<String>>,
    equations: Vec<EquationJson>,
    cocycle_lattice_rank: usize,
    area_exponents_are_cocycle: bool,
    draws: DrawSummary,
}

const MC_DRAWS: usize = 100;

fn mc(ctx: &Context) -> Result<Artifact, CliError> {
    json_only(ctx)?;
    let c = finite_config(ctx)?;
    let system = circuit_equations(&c);
    let lattice = cocycle_lattice(&c);
    let tables = build_structure_tables(&c, Variant::Marked, ctx.spec.seed).map_err(internal)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.spec.seed);
    let mut draws = DrawSummary { total: MC_DRAWS, maurer_cartan: 0, not_maurer_cartan: 0, verdicts_agree: true };
    for k in 0..MC_DRAWS {
        let model = if k % 4 < 2 { McModel::Multiplicative } else { McModel::Additive };
        let mut gamma = random_mc_element(&lattice, model, &mut rng);
        if k % 2 == 1 {
            gamma = perturb(&gamma, &mut rng);
        }
        match is_mc(&c, &gamma, &tables) {
            Ok(v) if v.is_mc => draws.maurer_cartan += 1,
            Ok(_) => draws.not_maurer_cartan += 1,
            Err(McError::Disagreement(_)) => draws.verdicts_agree = false,
            Err(e) => return Err(internal(e)),
        }
    }
    let exponents = system.exponent_vectors();
    let report = McReport {
        simplices: system.simplices.iter().map(|&s| labels(&c, s)).collect(),
        equations: system
            .equations
            .iter()
            .zip(exponents)
            .map(|(eq, (left, right))| EquationJson {
                support: labels(&c, eq.circuit.support),
                positive: labels(&c, eq.circuit.positive),
                negative: labels(&c, eq.circuit.negative),
                left,
                right,
            })
            .collect(),
        cocycle_lattice_rank: lattice.rank(),
        area_exponents_are_cocycle: lattice.is_additive_cocycle(&area_exponents(&c)),
        draws,
    };
    let agree = report.draws.verdicts_agree;
    let area = report.area_exponents_are_cocycle;
    Ok(Artifact::json(report)
        .check(agree, Status::InvariantFailure, "direct MC evaluation disagrees with the binomial system")
        .check(area, Status::InvariantFailure, "area exponents are not a cocycle"))
}

fn attach(ctx: &Context) -> Result<InfinityConfig, CliError> {
    attach_infinity(&ctx.finite(), ctx.direction()).map_err(invalid)
}

#[derive(Serialize)]
struct ElementJson {
    cell: Vec<String>,
    left: usize,
    right: usize,
    index: usize,
    degree: i32,
}

#[derive(Serialize)]
struct ProductJson {
    left: usize,
    right: usize,
    output: usize,
    coefficient: String,
}

#[derive(Serialize)]
struct AlgebraReport {
    units: Vec<String>,
    elements: Vec<ElementJson>,
    products: Vec<ProductJson>,
    associative: bool,
    triangular: bool,
    tensor_d_squared: bool,
    other_arities: BTreeMap<usize, usize>,
}

fn algebra_report(c: Option<&Config>, r: &TriangularAlgebra) -> AlgebraReport {
    let cell = |e: &secpoly_core::relative::BasisElement| match c {
        Some(c) => labels(c, e.cell),
        None => vec![r.units[e.left].clone(), r.units[e.right].clone()],
    };
    AlgebraReport {
        units: r.units.clone(),
        elements: r
            .elements
            .iter()
            .map(|e| ElementJson { cell: cell(e), left: e.left, right: e.right, index: e.index, degree: e.degree })
            .collect(),
        products: r
            .products
            .iter()
            .flat_map(|(&(a, b), terms)| {
                terms.iter().map(move |(z, v)| ProductJson {
                    left: a,
                    right: b,
                    output: *z,
                    coefficient: format_rational(v),
                })
            })
            .collect(),
        associative: r.associativity_failures().is_empty(),
        triangular: r.triangularity_violations().is_empty(),
        tensor_d_squared: r.verify_tensor_d_squared().is_empty(),
        other_arities: r.other_arities.clone(),
    }
}

/// A line with a negative direction is read right to left.
fn oriented_line(pc: &PointConfig, direction: &[secpoly_core::exactla::Rational]) -> Result<PointConfig, CliError> {
    if direction[0] > secpoly_core::exactla::int(0) {
        return Ok(pc.clone());
    }
    let points = pc
        .points()
        .iter()
        .map(|p| LabeledPoint { label: p.label.clone(), coords: vec![-p.coords[0].clone()] })
        .collect();
    PointConfig::new(1, points, None).map_err(invalid)
}

fn relative_r(ctx: &Context) -> Result<Artifact, CliError> {
    json_only(ctx)?;
    let report = match ctx.input.config.dim() {
        1 => {
            let line = oriented_line(&ctx.finite(), &ctx.direction())?;
            algebra_report(None, &build_r_1d(&line).map_err(internal)?)
        }
        2 => {
            let ic = attach(ctx)?;
            let cs = coefficients(ctx, &ic.config)?;
            let md = mixed_differential(&ic, &cs, &SecondaryCache::new(&ic.config, ctx.spec.seed)).map_err(invalid)?;
            let dt = md.decorate(&ic).map_err(internal)?;
            algebra_report(Some(&ic.config), &build_r_infty(&ic, &md, &dt).map_err(internal)?)
        }
        d => return Err(invalid(format!("relative-r needs d = 1 or d = 2, got {d}"))),
    };
    let structural = report.associative && report.triangular && report.tensor_d_squared;
    let binary = report.other_arities.is_empty();
    Ok(Artifact::json(report)
        .check(structural, Status::InvariantFailure, "R is not an associative triangular algebra")
        .check(binary, Status::ValidationFailure, "operations of arity other than two were generated"))
}

#[derive(Serialize)]
struct OneFiniteJson {
    polygon: Vec<String>,
    finite: Vec<String>,
    left_handle: Vec<String>,
    right_handle: Vec<String>,
    infinite: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct PsiComponentJson {
    entries: usize,
    matrix_elements: usize,
}

#[derive(Serialize)]
struct PsiReport {
    components: BTreeMap<usize, PsiComponentJson>,
    higher_components: BTreeMap<usize, usize>,
    higher_entries: Vec<EntryJson>,
    one_finite: Vec<OneFiniteJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    construction_matches_secondary: Option<bool>,
}

fn relative_psi(ctx: &Context) -> Result<Artifact, CliError> {
    json_only(ctx)?;
    let ic = attach(ctx)?;
    if ic.config.dim() != 2 {
        return Err(invalid("relative-psi needs d = 2"));
    }
    let c = &ic.config;
    let cs = coefficients(ctx, c)?;
    let cache = SecondaryCache::new(c, ctx.spec.seed);
    let md = mixed_differential(&ic, &cs, &cache).map_err(invalid)?;
    let psi = extract_psi(&ic, &md).map_err(internal)?;
    let polygons: Vec<_> = full_dimensional_markings(c, true).into_iter().filter(|&p| ic.is_infinite(p)).collect();
    let mut one_finite = Vec::new();
    let mut matches = true;
    for &p in &polygons {
        let built = one_finite_subdivisions(&ic, p).map_err(internal)?;
        if ctx.spec.oracle {
            let ours: BTreeSet<Subdivision> = built.iter().map(|o| o.subdivision()).collect();
            matches &= ours == one_finite_from_secondary(&ic, &cache, p).map_err(internal)?;
        }
        one_finite.extend(built.into_iter().map(|o| OneFiniteJson {
            polygon: labels(c, o.polygon),
            finite: labels(c, o.finite),
            left_handle: o.left_handle.iter().map(|&i| c.label(i).to_string()).collect(),
            right_handle: o.right_handle.iter().map(|&i| c.label(i).to_string()).collect(),
            infinite: o.infinite.iter().map(|&b| labels(c, b)).collect(),
        }));
    }
    let dt = md.decorate(&ic).map_err(internal)?;
    let higher_entries = psi
        .entries
        .iter()
        .filter(|(&n, _)| n >= 2)
        .flat_map(|(_, list)| list.iter())
        .map(|&i| secpoly_core::io::entry_to_json(c, &md.tables.entries[i], Some(&dt.entry_matrix(i))))
        .collect();
    let report = PsiReport {
        components: psi
            .entries
            .iter()
            .map(|(&n, list)| (n, PsiComponentJson { entries: list.len(), matrix_elements: psi.matrix_elements[&n] }))
            .collect(),
        higher_components: psi.higher(),
        higher_entries,
        one_finite,
        construction_matches_secondary: ctx.spec.oracle.then_some(matches),
    };
    Ok(Artifact::json(report).check(matches, Status::InvariantFailure, "1-finite construction disagrees with Σ"))
}

fn universality(ctx: &Context) -> Result<Artifact, CliError> {
    json_only(ctx)?;
    let ic = attach(ctx)?;
    let cs = coefficients(ctx, &ic.config)?;
    let report: UniversalityReport = verify_universality(&ic, &cs, ctx.spec.seed).map_err(invalid)?;
    let structure = report.structure_holds();
    let quasi_iso = report.quasi_iso;
    let mismatched = report.mismatched_degrees.clone();
    Ok(Artifact::json(report)
        .check(structure, Status::InvariantFailure, "a structural check of the universality pipeline failed")
        .check(
            quasi_iso,
            Status::ValidationFailure,
            &format!("Ψ₁ is not a quasi-isomorphism in degrees {mismatched:?}"),
        ))
}

#[derive(Serialize)]
struct WebVertexJson {
    cell: Vec<String>,
    position: Vec<String>,
}

#[derive(Serialize)]
struct WebEdgeJson {
    from: usize,
    to: usize,
    wall: Vec<String>,
}

#[derive(Serialize)]
struct WebRayJson {
    vertex: usize,
    wall: Vec<String>,
    direction: Vec<String>,
}

#[derive(Serialize)]
struct WebJson {
    subdivision: SubdivisionJson,
    vertices: Vec<WebVertexJson>,
    edges: Vec<WebEdgeJson>,
    rays: Vec<WebRayJson>,
    balanced: bool,
}

fn web_export(ctx: &Context) -> Result<Artifact, CliError> {
    let c = finite_config(ctx)?;
    if c.dim() != 2 {
        return Err(invalid("dual webs need d = 2"));
    }
    let sp = build_secondary(&c, ctx.spec.seed).map_err(internal)?;
    let webs = sp
        .faces
        .iter()
        .map(|f| dual_web(&c, &f.subdivision).map(|w| (&f.subdivision, w)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(internal)?;
    let balanced = webs.iter().all(|(_, w)| w.balanced);
    let artifact = match ctx.spec.format {
        Format::Dot => Artifact::dot(webs.iter().map(|(_, w)| web_dot(&c, w)).collect()),
        Format::Json => Artifact::json(
            webs.iter()
                .map(|(s, w)| WebJson {
                    subdivision: subdivision_to_json(&c, s),
                    vertices: w
                        .vertices
                        .iter()
                        .map(|v| WebVertexJson { cell: labels(&c, v.cell), position: rational_strings(&v.position) })
                        .collect(),
                    edges: w
                        .edges
                        .iter()
                        .map(|e| WebEdgeJson { from: e.from, to: e.to, wall: labels(&c, e.wall) })
                        .collect(),
                    rays: w
                        .rays
                        .iter()
                        .map(|r| WebRayJson {
                            vertex: r.vertex,
                            wall: labels(&c, r.wall),
                            direction: rational_strings(&r.direction),
                        })
                        .collect(),
                    balanced: w.balanced,
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok(artifact.check(balanced, Status::InvariantFailure, "a dual web is not balanced"))
}
