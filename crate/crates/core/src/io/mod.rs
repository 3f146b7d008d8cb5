//! JSON at the I/O boundary: the input configuration schema with field-precise errors,
//! coefficient systems by label, and label-keyed views of subdivisions, tables and matrices.
//! Rationals are strings throughout.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{CoefficientSystem, WallSpace};
use crate::exactla::{format_rational, parse_rational, MatrixQ, Rational};
use crate::geometry::{Config, LabeledPoint, PointConfig, PointSet};
use crate::linfty::{StructureTables, TableEntry};
use crate::subdivision::Subdivision;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

fn field(path: impl Into<String>, message: impl ToString) -> IoError {
    IoError::Field { path: path.into(), message: message.to_string() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub label: String,
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfinityJson {
    pub direction: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    /// Degree (as a string key) to dimension.
    pub graded_dims: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsJson {
    pub edges: Vec<EdgeJson>,
}

/// The input configuration file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputJson {
    pub dimension: usize,
    pub points: Vec<PointJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinity: Option<InfinityJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<CoefficientsJson>,
}

/// A parsed input: the configuration and the coefficient declarations, still keyed by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Input {
    pub config: PointConfig,
    pub coefficients: Option<CoefficientsJson>,
}

fn rationals(path: &str, raw: &[String]) -> Result<Vec<Rational>, IoError> {
    raw.iter().enumerate().map(|(k, s)| parse_rational(s).map_err(|e| field(format!("{path}[{k}]"), e))).collect()
}

pub fn parse_input(text: &str) -> Result<Input, IoError> {
    let raw: InputJson = serde_json::from_str(text).map_err(|e| IoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    input_from_json(&raw)
}

pub fn input_from_json(raw: &InputJson) -> Result<Input, IoError> {
    let mut seen = BTreeMap::new();
    let mut points = Vec::with_capacity(raw.points.len());
    for (k, p) in raw.points.iter().enumerate() {
        if let Some(first) = seen.insert(p.label.clone(), k) {
            return Err(field(
                format!("points[{k}].label"),
                format!("duplicate label {:?} (first at points[{first}])", p.label),
            ));
        }
        let path = format!("points[{k}].coords");
        if p.coords.len() != raw.dimension {
            return Err(field(path, format!("expected {} coordinates, got {}", raw.dimension, p.coords.len())));
        }
        points.push(LabeledPoint { label: p.label.clone(), coords: rationals(&path, &p.coords)? });
    }
    let direction = match &raw.infinity {
        Some(inf) => {
            if inf.direction.len() != raw.dimension {
                return Err(field(
                    "infinity.direction",
                    format!("expected {} components, got {}", raw.dimension, inf.direction.len()),
                ));
            }
            Some(rationals("infinity.direction", &inf.direction)?)
        }
        None => None,
    };
    let config = PointConfig::new(raw.dimension, points, direction).map_err(|e| field("points", e))?;
    Ok(Input { config, coefficients: raw.coefficients.clone() })
}

/// Resolves labelled edge declarations against `c`. Only planar configurations carry edge
/// coefficients; an edge `from → to` refers to the orientation from `from` to `to`.
pub fn coefficient_system(c: &Config, raw: Option<&CoefficientsJson>) -> Result<CoefficientSystem, IoError> {
    let mut cs = CoefficientSystem::trivial();
    let Some(raw) = raw else { return Ok(cs) };
    if !raw.edges.is_empty() && c.dim() != 2 {
        return Err(field("coefficients.edges", "edge coefficients need d = 2"));
    }
    let mut seen: BTreeMap<PointSet, usize> = BTreeMap::new();
    for (k, e) in raw.edges.iter().enumerate() {
        let path = format!("coefficients.edges[{k}]");
        let index = |label: &str, key: &str| {
            c.index_of(label).ok_or_else(|| field(format!("{path}.{key}"), format!("unknown label {label:?}")))
        };
        let (from, to) = (index(&e.from, "from")?, index(&e.to, "to")?);
        if from == to {
            return Err(field(&path, "an edge needs two distinct endpoints"));
        }
        let wall = PointSet::from_iter([from, to]);
        if let Some(first) = seen.insert(wall, k) {
            return Err(field(&path, format!("edge declared twice (first at coefficients.edges[{first}])")));
        }
        let mut degrees = Vec::new();
        for (deg, &n) in &e.graded_dims {
            let d: i32 =
                deg.trim().parse().map_err(|_| field(format!("{path}.graded_dims"), format!("bad degree {deg:?}")))?;
            degrees.extend(std::iter::repeat_n(d, n));
        }
        if degrees.is_empty() {
            return Err(field(format!("{path}.graded_dims"), "the space must be nonzero"));
        }
        degrees.sort();
        let pairing = match &e.pairing {
            None => None,
            Some(rows) => {
                let mut m = MatrixQ::zeros(rows.len(), rows.first().map_or(0, Vec::len));
                for (i, row) in rows.iter().enumerate() {
                    let path = format!("{path}.pairing[{i}]");
                    if row.len() != m.cols() {
                        return Err(field(path, "ragged matrix"));
                    }
                    for (j, v) in rationals(&path, row)?.into_iter().enumerate() {
                        m.set(i, j, v);
                    }
                }
                Some(m)
            }
        };
        let sign = if from < to { 1 } else { -1 };
        let space = WallSpace::new(sign, degrees, pairing).map_err(|e| field(format!("{path}.pairing"), e))?;
        cs.insert(wall, space);
    }
    Ok(cs)
}

/// The configuration (and coefficients) in input form.
pub fn input_to_json(input: &Input) -> InputJson {
    let pc = &input.config;
    InputJson {
        dimension: pc.dim(),
        points: pc
            .points()
            .iter()
            .map(|p| PointJson { label: p.label.clone(), coords: p.coords.iter().map(format_rational).collect() })
            .collect(),
        infinity: pc.infinity().map(|u| InfinityJson { direction: u.iter().map(format_rational).collect() }),
        coefficients: input.coefficients.clone(),
    }
}

pub fn labels(c: &Config, s: PointSet) -> Vec<String> {
    c.labels_of(s)
}

fn set_from_labels(c: &Config, path: &str, raw: &[String]) -> Result<PointSet, IoError> {
    raw.iter()
        .enumerate()
        .map(|(k, l)| c.index_of(l).ok_or_else(|| field(format!("{path}[{k}]"), format!("unknown label {l:?}"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionJson {
    pub parent: Vec<String>,
    pub cells: Vec<Vec<String>>,
}

pub fn subdivision_to_json(c: &Config, s: &Subdivision) -> SubdivisionJson {
    SubdivisionJson { parent: labels(c, s.parent), cells: s.cells().iter().map(|&b| labels(c, b)).collect() }
}

pub fn subdivision_from_json(c: &Config, raw: &SubdivisionJson) -> Result<Subdivision, IoError> {
    let parent = set_from_labels(c, "parent", &raw.parent)?;
    let cells = raw
        .cells
        .iter()
        .enumerate()
        .map(|(k, cell)| set_from_labels(c, &format!("cells[{k}]"), cell))
        .collect::<Result<_, _>>()?;
    Ok(Subdivision::new(parent, cells))
}

pub fn rational_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn matrix_strings(m: &MatrixQ) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| format_rational(&m.get(i, j))).collect()).collect()
}

/// A table coefficient: a scalar for 1 × 1 blocks, otherwise the full matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CoefficientJson {
    Scalar(String),
    Matrix(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryJson {
    pub inputs: Vec<Vec<String>>,
    pub output: Vec<String>,
    pub coefficient: CoefficientJson,
}

pub fn entry_to_json(c: &Config, e: &TableEntry, matrix: Option<&MatrixQ>) -> EntryJson {
    let coefficient = match matrix {
        Some(m) if m.rows() != 1 || m.cols() != 1 => CoefficientJson::Matrix(matrix_strings(m)),
        Some(m) => CoefficientJson::Scalar(format_rational(&m.get(0, 0))),
        None => CoefficientJson::Scalar(format_rational(&e.coefficient)),
    };
    EntryJson { inputs: e.inputs.iter().map(|&b| labels(c, b)).collect(), output: labels(c, e.output), coefficient }
}

/// Entries in canonical order: by arity, then input label lists, then output label list.
pub fn tables_to_json(c: &Config, t: &StructureTables, matrix: impl Fn(usize) -> Option<MatrixQ>) -> Vec<EntryJson> {
    let mut out: Vec<EntryJson> =
        t.entries.iter().enumerate().map(|(i, e)| entry_to_json(c, e, matrix(i).as_ref())).collect();
    out.sort_by(|a, b| (a.inputs.len(), &a.inputs, &a.output).cmp(&(b.inputs.len(), &b.inputs, &b.output)));
    out
}
