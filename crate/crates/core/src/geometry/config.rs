use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::circuits::{circuit_of, Circuit};
use super::pointset::{PointSet, MAX_POINTS};
use super::GeometryError;
use crate::exactla::{determinant, determinant_sign, int, serde_rational, Rational};

pub const INFINITY_LABEL: &str = "∞";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub label: String,
    #[serde(with = "serde_rational::vec")]
    pub coords: Vec<Rational>,
}

/// Validated input configuration: unique labels, sorted by label, optional symbolic ∞ direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    dim: usize,
    points: Vec<LabeledPoint>,
    infinity: Option<Vec<Rational>>,
}

/// Argument of an orientation predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointRef {
    Finite(usize),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub labels: Vec<String>,
    pub kind: ViolationKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    AffinelyDependent,
    DependentWithInfinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralPositionReport {
    pub passes: bool,
    pub violations: Vec<Violation>,
}

impl PointConfig {
    pub fn new(
        dim: usize,
        mut points: Vec<LabeledPoint>,
        infinity: Option<Vec<Rational>>,
    ) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::Dimension("dimension must be positive".into()));
        }
        if points.len() > MAX_POINTS - 1 {
            return Err(GeometryError::TooManyPoints(points.len()));
        }
        for p in &points {
            if p.label == INFINITY_LABEL {
                return Err(GeometryError::ReservedLabel(p.label.clone()));
            }
            if p.coords.len() != dim {
                return Err(GeometryError::Dimension(format!(
                    "point {:?} has {} coordinates, expected {dim}",
                    p.label,
                    p.coords.len()
                )));
            }
        }
        points.sort_by(|a, b| a.label.cmp(&b.label));
        if let Some((a, _)) = points.iter().tuple_windows().find(|(a, b)| a.label == b.label) {
            return Err(GeometryError::DuplicateLabel(a.label.clone()));
        }
        if let Some(u) = &infinity {
            if u.len() != dim {
                return Err(GeometryError::Dimension(format!(
                    "infinity direction has {} coordinates, expected {dim}",
                    u.len()
                )));
            }
            if u.iter().all(Zero::is_zero) {
                return Err(GeometryError::ZeroDirection);
            }
        }
        Ok(PointConfig { dim, points, infinity })
    }

    pub fn from_i64(dim: usize, pts: &[(&str, &[i64])]) -> Self {
        let points = pts
            .iter()
            .map(|(l, c)| LabeledPoint { label: l.to_string(), coords: c.iter().map(|&x| int(x)).collect() })
            .collect();
        PointConfig::new(dim, points, None).expect("valid literal configuration")
    }

    pub fn with_infinity(mut self, direction: Vec<Rational>) -> Result<Self, GeometryError> {
        self.infinity = Some(direction);
        PointConfig::new(self.dim, self.points, self.infinity)
    }

    pub fn without_infinity(&self) -> Self {
        PointConfig { infinity: None, ..self.clone() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LabeledPoint] {
        &self.points
    }

    pub fn infinity(&self) -> Option<&[Rational]> {
        self.infinity.as_deref()
    }

    /// Sign of `det [[1, p_0], …, [1, p_d]]`, with ∞ contributing the row `(0, u)`.
    pub fn orient(&self, tuple: &[PointRef]) -> i8 {
        assert_eq!(tuple.len(), self.dim + 1, "orient needs d+1 arguments");
        let rows: Vec<Vec<Rational>> = tuple
            .iter()
            .map(|r| match r {
                PointRef::Finite(i) => {
                    let mut row = vec![Rational::one()];
                    row.extend(self.points[*i].coords.iter().cloned());
                    row
                }
                PointRef::Infinity => {
                    let u = self.infinity.as_ref().expect("configuration has no infinity");
                    let mut row = vec![Rational::zero()];
                    row.extend(u.iter().cloned());
                    row
                }
            })
            .collect();
        determinant_sign(&rows)
    }

    /// Key that orders finite points by the slope of the line through ∞ (`p × u` for d = 2).
    pub fn slope_key(&self, i: usize) -> Rational {
        let u = self.infinity.as_ref().expect("configuration has no infinity");
        let p = &self.points[i].coords;
        match self.dim {
            1 => p[0].clone() * u[0].signum(),
            2 => &p[0] * &u[1] - &p[1] * &u[0],
            _ => unimplemented!("slope order is defined for d <= 2"),
        }
    }

    /// Finite labels sorted by the slope order.
    pub fn slope_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&a| self.slope_key(a));
        idx
    }
}

pub fn check_general_position(c: &PointConfig) -> GeneralPositionReport {
    let d = c.dim();
    let n = c.len();
    let mut violations = Vec::new();
    for k in 2..=(d + 1).min(n) {
        for sub in (0..n).combinations(k) {
            if affine_rank(c, &sub) < k {
                violations.push(Violation {
                    labels: sub.iter().map(|&i| c.points[i].label.clone()).collect(),
                    kind: ViolationKind::AffinelyDependent,
                });
            }
        }
    }
    if c.infinity().is_some() {
        for sub in (0..n).combinations(d.min(n)) {
            let mut t: Vec<PointRef> = sub.iter().map(|&i| PointRef::Finite(i)).collect();
            if t.len() < d {
                continue;
            }
            t.push(PointRef::Infinity);
            if c.orient(&t) == 0 {
                let mut labels: Vec<String> = sub.iter().map(|&i| c.points[i].label.clone()).collect();
                labels.push(INFINITY_LABEL.to_string());
                violations.push(Violation { labels, kind: ViolationKind::DependentWithInfinity });
            }
        }
    }
    // keep only minimal dependent subsets so a single collinear triple is reported once
    let minimal: Vec<Violation> = violations
        .iter()
        .filter(|v| {
            !violations.iter().any(|w| {
                w.kind == v.kind && w.labels.len() < v.labels.len() && w.labels.iter().all(|l| v.labels.contains(l))
            })
        })
        .cloned()
        .collect();
    GeneralPositionReport { passes: minimal.is_empty(), violations: minimal }
}

fn affine_rank(c: &PointConfig, sub: &[usize]) -> usize {
    let base = &c.points[sub[0]].coords;
    let rows: Vec<Vec<Rational>> =
        sub[1..].iter().map(|&i| c.points[i].coords.iter().zip(base).map(|(x, y)| x - y).collect()).collect();
    1 + crate::exactla::MatrixQ::from_dense(rows.len(), c.dim(), &rows).rank()
}

/// Per-simplex data precomputed for the working configuration.
#[derive(Clone, Debug)]
pub struct SimplexInfo {
    /// Orientation sign of the vertices in increasing index order.
    pub orientation: i8,
    pub volume: Rational,
    /// Configuration points in the open simplex.
    pub interior: PointSet,
}

/// Working configuration: concrete coordinates (∞ instantiated at a certified far point),
/// indexed in label order, with simplex and containment tables.
#[derive(Clone, Debug)]
pub struct Config {
    dim: usize,
    labels: Vec<String>,
    coords: Vec<Vec<Rational>>,
    infinity: Option<usize>,
    direction: Option<Vec<Rational>>,
    far_scale: Option<Rational>,
    simplices: HashMap<PointSet, SimplexInfo>,
    containers: Vec<Vec<PointSet>>,
    circuits: OnceLock<HashMap<PointSet, Circuit>>,
    barycentric: OnceLock<HashMap<(PointSet, usize), Vec<Rational>>>,
}

impl Config {
    /// Builds the working configuration; rejects inputs failing general position.
    pub fn new(pc: &PointConfig) -> Result<Self, GeometryError> {
        let report = check_general_position(pc);
        if !report.passes {
            return Err(GeometryError::GeneralPosition(report));
        }
        let mut entries: Vec<(String, Vec<Rational>)> =
            pc.points().iter().map(|p| (p.label.clone(), p.coords.clone())).collect();
        let mut far_scale = None;
        if let Some(u) = pc.infinity() {
            let (far, m) = certified_far_point(pc, u)?;
            entries.push((INFINITY_LABEL.to_string(), far));
            far_scale = Some(m);
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let infinity = entries.iter().position(|e| e.0 == INFINITY_LABEL);
        let (labels, coords): (Vec<String>, Vec<Vec<Rational>>) = entries.into_iter().unzip();
        Ok(Config::assemble(pc.dim(), labels, coords, infinity, pc.infinity().map(<[Rational]>::to_vec), far_scale))
    }

    /// Concrete configuration with the far point placed at scale `m` (no certification).
    pub fn with_far_scale(pc: &PointConfig, m: &Rational) -> Result<Self, GeometryError> {
        let u = pc.infinity().ok_or(GeometryError::NoInfinity)?;
        let mut entries: Vec<(String, Vec<Rational>)> =
            pc.points().iter().map(|p| (p.label.clone(), p.coords.clone())).collect();
        entries.push((INFINITY_LABEL.to_string(), far_point(pc, u, m)));
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let infinity = entries.iter().position(|e| e.0 == INFINITY_LABEL);
        let (labels, coords): (Vec<String>, Vec<Vec<Rational>>) = entries.into_iter().unzip();
        Ok(Config::assemble(pc.dim(), labels, coords, infinity, Some(u.to_vec()), Some(m.clone())))
    }

    fn assemble(
        dim: usize,
        labels: Vec<String>,
        coords: Vec<Vec<Rational>>,
        infinity: Option<usize>,
        direction: Option<Vec<Rational>>,
        far_scale: Option<Rational>,
    ) -> Self {
        let n = labels.len();
        let mut simplices = HashMap::new();
        let mut containers = vec![Vec::new(); n];
        let mut fact = Rational::one();
        for k in 2..=dim {
            fact *= int(k as i64);
        }
        if n > dim {
            for s in PointSet::full(n).subsets_of_size(dim + 1) {
                let verts = s.to_vec();
                let rows = homogeneous_rows(&coords, &verts);
                let det = determinant(&rows);
                let orientation = if det.is_positive() { 1 } else { -1 };
                let mut interior = PointSet::EMPTY;
                for q in 0..n {
                    if s.contains(q) {
                        continue;
                    }
                    let inside = (0..=dim).all(|pos| {
                        let mut r = rows.clone();
                        r[pos] = homogeneous_row(&coords[q]);
                        determinant_sign(&r) == orientation
                    });
                    if inside {
                        interior = interior.with(q);
                        containers[q].push(s);
                    }
                }
                simplices.insert(s, SimplexInfo { orientation, volume: det.abs() / &fact, interior });
            }
        }
        Config {
            dim,
            labels,
            coords,
            infinity,
            direction,
            far_scale,
            simplices,
            containers,
            circuits: OnceLock::new(),
            barycentric: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn labels_of(&self, s: PointSet) -> Vec<String> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn set_of(&self, labels: &[&str]) -> Result<PointSet, GeometryError> {
        labels.iter().map(|l| self.index_of(l).ok_or_else(|| GeometryError::UnknownLabel(l.to_string()))).collect()
    }

    pub fn coords(&self, i: usize) -> &[Rational] {
        &self.coords[i]
    }

    pub fn infinity(&self) -> Option<usize> {
        self.infinity
    }

    pub fn direction(&self) -> Option<&[Rational]> {
        self.direction.as_deref()
    }

    pub fn far_scale(&self) -> Option<&Rational> {
        self.far_scale.as_ref()
    }

    pub fn finite(&self) -> PointSet {
        match self.infinity {
            Some(i) => self.all().without(i),
            None => self.all(),
        }
    }

    pub fn simplex(&self, s: PointSet) -> Option<&SimplexInfo> {
        self.simplices.get(&s)
    }

    pub fn simplices(&self) -> impl Iterator<Item = (&PointSet, &SimplexInfo)> {
        self.simplices.iter()
    }

    /// All d-simplices inside `b`, sorted.
    pub fn simplices_in(&self, b: PointSet) -> Vec<PointSet> {
        if b.len() <= self.dim {
            return Vec::new();
        }
        b.subsets_of_size(self.dim + 1)
    }

    /// Sign of the orientation determinant of an ordered tuple of concrete points.
    pub fn orient(&self, tuple: &[usize]) -> i8 {
        assert_eq!(tuple.len(), self.dim + 1);
        determinant_sign(&homogeneous_rows(&self.coords, tuple))
    }

    /// Affine dimension of Conv(b) is d (general position makes this a cardinality test).
    pub fn is_full_dimensional(&self, b: PointSet) -> bool {
        b.len() > self.dim
    }

    pub fn in_hull(&self, q: usize, b: PointSet) -> bool {
        b.contains(q) || self.containers[q].iter().any(|s| s.is_subset(b))
    }

    pub fn is_vertex(&self, p: usize, b: PointSet) -> bool {
        b.contains(p) && !self.containers[p].iter().any(|s| s.is_subset(b.without(p)))
    }

    pub fn vertices(&self, b: PointSet) -> PointSet {
        if !self.is_full_dimensional(b) {
            return b;
        }
        b.iter().filter(|&p| self.is_vertex(p, b)).collect()
    }

    /// All configuration points inside Conv(b).
    pub fn closure(&self, b: PointSet) -> PointSet {
        if !self.is_full_dimensional(b) {
            return b;
        }
        (0..self.len()).filter(|&q| self.in_hull(q, b)).collect()
    }

    pub fn is_geometric(&self, b: PointSet) -> bool {
        self.closure(b) == b
    }

    pub fn is_infinite(&self, b: PointSet) -> bool {
        self.infinity.is_some_and(|i| b.contains(i))
    }

    /// Lebesgue volume of Conv(b) from any triangulation; here the star from its first vertex.
    pub fn volume(&self, b: PointSet) -> Rational {
        self.facets(b)
            .iter()
            .filter_map(|f| {
                let apex = self.vertices(b).first()?;
                (!f.vertices.contains(apex)).then(|| self.simplices[&f.vertices.with(apex)].volume.clone())
            })
            .fold(Rational::zero(), |a, v| a + v)
    }

    /// Boundary facets of Conv(b): vertex d-subsets with every other point of b strictly on one side.
    /// `inner_sign` is the orientation of (facet vertices in index order, any inner point).
    pub fn facets(&self, b: PointSet) -> Vec<HullFacet> {
        let verts = self.vertices(b);
        let mut out = Vec::new();
        if !self.is_full_dimensional(b) {
            return out;
        }
        for f in verts.subsets_of_size(self.dim) {
            let mut side = 0i8;
            let mut ok = true;
            for q in b.difference(f).iter() {
                let mut t = f.to_vec();
                t.push(q);
                let s = self.orient(&t);
                if side == 0 {
                    side = s;
                } else if s != side {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(HullFacet { vertices: f, inner_sign: side });
            }
        }
        out
    }

    /// Counter-clockwise vertex cycle of Conv(b) for d = 2, starting from the lowest index.
    pub fn ccw_vertices(&self, b: PointSet) -> Vec<usize> {
        assert_eq!(self.dim, 2, "ccw order needs d = 2");
        let facets = self.facets(b);
        let mut next = HashMap::new();
        for f in &facets {
            let v = f.vertices.to_vec();
            // (a, b) with the interior on the left runs counter-clockwise
            let (a, c) = if f.inner_sign > 0 { (v[0], v[1]) } else { (v[1], v[0]) };
            next.insert(a, c);
        }
        let Some(start) = self.vertices(b).first() else {
            return Vec::new();
        };
        let mut cycle = vec![start];
        let mut cur = start;
        while let Some(&n) = next.get(&cur) {
            if n == start {
                break;
            }
            cycle.push(n);
            cur = n;
        }
        cycle
    }

    /// Labels of a set, rendered for messages and keys.
    pub fn describe(&self, b: PointSet) -> String {
        format!("{{{}}}", self.labels_of(b).join(","))
    }

    /// Circuit supported on a (d+2)-subset.
    pub fn circuit(&self, support: PointSet) -> &Circuit {
        let table = self.circuits.get_or_init(|| {
            if self.len() < self.dim + 2 {
                return HashMap::new();
            }
            self.all().subsets_of_size(self.dim + 2).into_iter().map(|z| (z, circuit_of(self, z))).collect()
        });
        &table[&support]
    }

    /// Affine coordinates of point `q` with respect to the simplex `sigma` (in index order).
    pub fn barycentric(&self, sigma: PointSet, q: usize) -> &[Rational] {
        let table = self.barycentric.get_or_init(|| {
            let mut t = HashMap::new();
            for &s in self.simplices.keys() {
                let verts = s.to_vec();
                let rows = homogeneous_rows(&self.coords, &verts);
                let det = determinant(&rows);
                for p in 0..self.len() {
                    let coords: Vec<Rational> = (0..verts.len())
                        .map(|pos| {
                            let mut r = rows.clone();
                            r[pos] = homogeneous_row(&self.coords[p]);
                            determinant(&r) / &det
                        })
                        .collect();
                    t.insert((s, p), coords);
                }
            }
            t
        });
        &table[&(sigma, q)]
    }

    /// Whether simplices `s` and `t` meet in a common face: no circuit has one part in each.
    pub fn properly_intersect(&self, s: PointSet, t: PointSet) -> bool {
        let u = s.union(t);
        if u.len() < self.dim + 2 {
            return true;
        }
        u.subsets_of_size(self.dim + 2).into_iter().all(|z| {
            let c = self.circuit(z);
            !((c.positive.is_subset(s) && c.negative.is_subset(t))
                || (c.negative.is_subset(s) && c.positive.is_subset(t)))
        })
    }

    pub fn simplex_set(&self) -> BTreeSet<PointSet> {
        self.simplices.keys().copied().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HullFacet {
    pub vertices: PointSet,
    pub inner_sign: i8,
}

fn homogeneous_row(p: &[Rational]) -> Vec<Rational> {
    let mut row = vec![Rational::one()];
    row.extend(p.iter().cloned());
    row
}

fn homogeneous_rows(coords: &[Vec<Rational>], idx: &[usize]) -> Vec<Vec<Rational>> {
    idx.iter().map(|&i| homogeneous_row(&coords[i])).collect()
}

fn far_point(pc: &PointConfig, u: &[Rational], m: &Rational) -> Vec<Rational> {
    let n = int(pc.len().max(1) as i64);
    (0..pc.dim())
        .map(|k| {
            let centroid = pc.points().iter().fold(Rational::zero(), |a, p| a + &p.coords[k]) / &n;
            centroid + m * &u[k]
        })
        .collect()
}

/// Doubles `M` until every orientation involving the far point `c + M u` agrees with the
/// symbolic sign at both `M` and `2M`.
fn certified_far_point(pc: &PointConfig, u: &[Rational]) -> Result<(Vec<Rational>, Rational), GeometryError> {
    let d = pc.dim();
    let n = pc.len();
    let spread = pc.points().iter().flat_map(|p| p.coords.iter()).fold(Rational::one(), |a, x| a + x.abs());
    let tuples: Vec<Vec<usize>> = (0..n).combinations(d).collect();
    let symbolic: Vec<i8> = tuples
        .iter()
        .map(|t| {
            let mut r: Vec<PointRef> = t.iter().map(|&i| PointRef::Finite(i)).collect();
            r.push(PointRef::Infinity);
            pc.orient(&r)
        })
        .collect();
    let concrete_sign = |far: &[Rational], t: &[usize]| {
        let mut rows: Vec<Vec<Rational>> = t.iter().map(|&i| homogeneous_row(&pc.points()[i].coords)).collect();
        rows.push(homogeneous_row(far));
        determinant_sign(&rows)
    };
    let mut m = spread;
    for _ in 0..256 {
        let far = far_point(pc, u, &m);
        let far2 = far_point(pc, u, &(&m * int(2)));
        let agree =
            tuples.iter().zip(&symbolic).all(|(t, &s)| concrete_sign(&far, t) == s && concrete_sign(&far2, t) == s);
        if agree {
            return Ok((far, m));
        }
        m *= int(2);
    }
    Err(GeometryError::Certification)
}
