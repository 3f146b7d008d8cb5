//! Job specification and dispatch for the `secpoly` binary. Every artifact embeds the tool
//! version, the SHA-256 of the input, the seed and the ∞ direction.

mod commands;

use std::fmt;

use clap::ValueEnum;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use secpoly_core::exactla::{format_rational, int, Rational};
use secpoly_core::geometry::{check_general_position, PointConfig};
use secpoly_core::io::{parse_input, Input};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Check,
    Triangulations,
    Secondary,
    Linfty,
    Mc,
    RelativeR,
    RelativePsi,
    Universality,
    WebExport,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Triangulations => "triangulations",
            Command::Secondary => "secondary",
            Command::Linfty => "linfty",
            Command::Mc => "mc",
            Command::RelativeR => "relative-r",
            Command::RelativePsi => "relative-psi",
            Command::Universality => "universality",
            Command::WebExport => "web-export",
        }
    }

    fn uses_infinity(self) -> bool {
        matches!(self, Command::RelativeR | Command::RelativePsi | Command::Universality)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Dot,
}

/// One run: the command, the input text and the flags.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub input: String,
    pub format: Format,
    pub geometric_only: bool,
    pub flip_orientation: bool,
    pub seed: u64,
    pub jobs: usize,
    pub oracle: bool,
    pub max_size: Option<usize>,
}

impl JobSpec {
    pub fn new(command: Command, input: impl Into<String>) -> Self {
        JobSpec {
            command,
            input: input.into(),
            format: Format::Json,
            geometric_only: false,
            flip_orientation: false,
            seed: 0,
            jobs: 1,
            oracle: false,
            max_size: None,
        }
    }
}

/// Exit status: 0 success, 1 validation failure, 2 internal-invariant failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Success = 0,
    ValidationFailure = 1,
    InvariantFailure = 2,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn status(&self) -> Status {
        match self {
            CliError::Validation(_) => Status::ValidationFailure,
            CliError::Internal(_) => Status::InvariantFailure,
        }
    }
}

/// Errors from the engine are internal unless the input itself is at fault.
pub(crate) fn internal(e: impl fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

pub(crate) fn invalid(e: impl fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

pub(crate) enum Body {
    Json(serde_json::Value),
    Dot(String),
}

/// Output of a command and the verdict of the checks it ran.
pub(crate) struct Artifact {
    body: Body,
    status: Status,
    message: Option<String>,
}

impl Artifact {
    pub(crate) fn json(value: impl Serialize) -> Self {
        Artifact {
            body: Body::Json(serde_json::to_value(value).expect("serializable")),
            status: Status::Success,
            message: None,
        }
    }

    pub(crate) fn dot(text: String) -> Self {
        Artifact { body: Body::Dot(text), status: Status::Success, message: None }
    }

    /// Marks a failed check; the worst status wins.
    pub(crate) fn fail(mut self, status: Status, message: impl Into<String>) -> Self {
        if status > self.status {
            self.status = status;
            self.message = Some(message.into());
        }
        self
    }

    pub(crate) fn check(self, ok: bool, status: Status, message: &str) -> Self {
        if ok {
            self
        } else {
            self.fail(status, message)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub tool_version: &'static str,
    pub input_sha256: String,
    pub seed: u64,
    pub infinity_direction: Option<Vec<String>>,
}

/// What the binary prints or writes, the exit status and a diagnostic for stderr.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub output: Option<String>,
    pub message: Option<String>,
}

/// Default ∞ direction: (0, 1) in the plane, +1 on a line.
pub fn default_direction(dim: usize) -> Vec<Rational> {
    (0..dim).map(|k| int(i64::from(k + 1 == dim))).collect()
}

pub(crate) struct Context {
    pub input: Input,
    pub spec: JobSpec,
}

impl Context {
    /// The configuration without ∞.
    pub fn finite(&self) -> PointConfig {
        self.input.config.without_infinity()
    }

    /// The ∞ direction for the relative commands: from the input, or the default.
    pub fn direction(&self) -> Vec<Rational> {
        self.input.config.infinity().map_or_else(|| default_direction(self.input.config.dim()), <[Rational]>::to_vec)
    }
}

pub fn run(spec: &JobSpec) -> Outcome {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(spec.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => return failure(Status::InvariantFailure, format!("thread pool: {e}")),
    };
    pool.install(|| run_in_pool(spec))
}

fn failure(status: Status, message: String) -> Outcome {
    Outcome { status, output: None, message: Some(message) }
}

fn run_in_pool(spec: &JobSpec) -> Outcome {
    let input = match parse_input(&spec.input) {
        Ok(i) => i,
        Err(e) => return failure(Status::ValidationFailure, format!("input: {e}")),
    };
    if let Some(max) = spec.max_size {
        if input.config.len() > max {
            return failure(
                Status::ValidationFailure,
                format!("input has {} points, more than --max-size {max}", input.config.len()),
            );
        }
    }
    if spec.command != Command::Check {
        let report = check_general_position(&input.config);
        if !report.passes {
            let first = report.violations.first().map(|v| v.labels.join(",")).unwrap_or_default();
            return failure(
                Status::ValidationFailure,
                format!(
                    "input is not in general position ({} violation(s), first {{{first}}})",
                    report.violations.len()
                ),
            );
        }
    }
    let ctx = Context { input, spec: spec.clone() };
    let direction = if spec.command.uses_infinity() {
        Some(ctx.direction())
    } else {
        ctx.input.config.infinity().map(<[Rational]>::to_vec)
    };
    let meta = Meta {
        tool_version: TOOL_VERSION,
        input_sha256: hex::encode(Sha256::digest(spec.input.as_bytes())),
        seed: spec.seed,
        infinity_direction: direction.map(|d| d.iter().map(format_rational).collect()),
    };
    let artifact = match commands::dispatch(&ctx) {
        Ok(a) => a,
        Err(e) => return failure(e.status(), e.to_string()),
    };
    let output = match artifact.body {
        Body::Json(result) => {
            let envelope = serde_json::json!({ "meta": meta, "command": spec.command.name(), "result": result });
            let mut text = serde_json::to_string_pretty(&envelope).expect("serializable");
            text.push('\n');
            text
        }
        Body::Dot(graph) => {
            let direction = meta.infinity_direction.as_ref().map_or_else(|| "none".to_string(), |d| d.join(" "));
            format!(
                "// command={} tool_version={} input_sha256={} seed={} infinity_direction={direction}\n{graph}",
                spec.command.name(),
                meta.tool_version,
                meta.input_sha256,
                meta.seed
            )
        }
    };
    Outcome { status: artifact.status, output: Some(output), message: artifact.message }
}
