//! `fundsol`: build and query fundamental-solution tables from the command line.
//!
//! Exit codes: 0 success, 2 operator not elliptic, 3 invalid input (bad flags, files or
//! values), 1 any other failure. Errors are written to stderr as one JSON object
//! `{"error": kind, "message": text, "field": name?}`.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fundsol::Error;

#[derive(Debug, Parser)]
#[command(
    name = "fundsol",
    version,
    about = "Fundamental solutions of elliptic constant-coefficient operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ellipticity margin, class index and contour radius of an operator.
    Check {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Assemble a table and write it as JSON.
    Build {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Evaluate S and S_0 on a tensor grid.
    Eval {
        #[arg(long)]
        table: PathBuf,
        /// One entry per axis: `value` or `lo:hi:count` (count >= 2), comma-separated.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Dump the harmonic coefficients of every term and the log polynomial.
    Series {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Build a table and run the delta test, residual scan, parity and log checks.
    Oracle {
        #[arg(long)]
        operator: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        /// Radial nodes of the delta test (at least 64).
        #[arg(long, default_value_t = 128)]
        grid: usize,
        /// Draw the residual-scan points at random with this seed instead of the fixed spiral.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Per-node comparison of the observed and predicted jump of d^beta v[mu].
    Jump {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        boundary: PathBuf,
        /// Density expression; overrides the one in the boundary file.
        #[arg(long)]
        density: Option<String>,
        /// Multi-index with |beta| = 2k - 1, e.g. `1,0`.
        #[arg(long)]
        beta: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Initial series order (raised adaptively up to 120 for inhomogeneous operators).
    #[arg(long, default_value_t = 40)]
    jmax: usize,
    /// Fix the sphere quadrature order; the harmonic degree becomes (order - 8) / 2.
    #[arg(long)]
    quad_order: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let message = e.to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            return report(&Error::InvalidInput {
                field: "arguments".into(),
                message: first.to_string(),
            });
        }
    };
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => report(&e),
    }
}

fn report(e: &Error) -> ExitCode {
    let mut obj = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
    if let Error::InvalidInput { field, .. } = e {
        obj["field"] = serde_json::Value::String(field.clone());
    }
    eprintln!("{obj}");
    ExitCode::from(exit_code(e))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonElliptic { .. } => 2,
        Error::InvalidInput { .. }
        | Error::Parse(_)
        | Error::Io(_)
        | Error::UnsupportedDimension(_)
        | Error::UnknownName(_)
        | Error::OutsideValidity { .. } => 3,
        _ => 1,
    }
}
