use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use secpoly_cli::{run, Command, Format, JobSpec};

/// Exact secondary polytopes, L∞ structure constants, Maurer–Cartan binomials and the
/// directed Hochschild comparison.
#[derive(Debug, Parser)]
#[command(name = "secpoly", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Input configuration JSON.
    #[arg(long)]
    input: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Geometric subpolytopes only (𝔤 instead of 𝔤̇).
    #[arg(long)]
    geometric_only: bool,
    /// Reverse the ambient orientation used for coefficient walls.
    #[arg(long)]
    flip_orientation: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Enable brute-force cross-checks.
    #[arg(long)]
    oracle: bool,
    /// Refuse inputs with more points.
    #[arg(long)]
    max_size: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let input = match std::fs::read_to_string(&args.input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input.display());
            return ExitCode::from(1);
        }
    };
    let spec = JobSpec {
        command: args.command,
        input,
        format: args.format,
        geometric_only: args.geometric_only,
        flip_orientation: args.flip_orientation,
        seed: args.seed,
        jobs: args.jobs,
        oracle: args.oracle,
        max_size: args.max_size,
    };
    let outcome = run(&spec);
    if let Some(text) = &outcome.output {
        let written = match &args.output {
            Some(path) => std::fs::write(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        };
        if let Err(e) = written {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(1);
        }
    }
    if let Some(message) = &outcome.message {
        eprintln!("{}: {message}", if outcome.status.code() == 0 { "note" } else { "error" });
    }
    ExitCode::from(outcome.status.code() as u8)
}
