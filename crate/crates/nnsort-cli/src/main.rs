//! Experiment runner for the model-guided sorter.
//!
//! Subcommands: `gen` (synthetic datasets), `train` (fit a position model),
//! `sort` (instrumented sort with a metrics report), `bench` (algorithm
//! comparison matrix), `iterations` (iteration-cap sweep), and `costmodel`
//! (closed-form coefficients and break-even size).
//!
//! Exit codes: 0 success, 1 usage error, 2 data/validation error,
//! 3 internal invariant violation.

mod bench;
mod costmodel;
mod gen;
mod iterations;
mod report;
mod sort_cmd;
mod train_cmd;
mod verify;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::fmt;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "nnsort", version, about = "Model-guided sorting experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset file (.bin or .csv by extension)
    Gen(gen::GenArgs),
    /// Train a position model on a dataset
    Train(train_cmd::TrainArgs),
    /// Sort a dataset with a trained model and report metrics
    Sort(sort_cmd::SortArgs),
    /// Run the algorithm comparison matrix and write a results CSV
    Bench(bench::BenchArgs),
    /// Sweep the iteration cap and report final conflict sizes
    Iterations(iterations::IterationsArgs),
    /// Evaluate the cost model from parameters or a metrics report
    Costmodel(costmodel::CostmodelArgs),
}

/// Failures mapped to exit codes.
pub enum CliError {
    /// Bad flag combinations caught past clap (exit 1).
    Usage(String),
    /// Anything wrong with inputs: files, parsing, validation (exit 2).
    Data(anyhow::Error),
    /// A self-check or internal consistency failure (exit 3).
    Invariant(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(err) => write!(f, "error: {err:#}"),
            CliError::Invariant(msg) => write!(f, "invariant violation: {msg}"),
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(err: E) -> Self {
        CliError::Data(err.into())
    }
}

pub type CliResult = Result<(), CliError>;

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Gen(args) => gen::run(args),
        Command::Train(args) => train_cmd::run(args),
        Command::Sort(args) => sort_cmd::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Iterations(args) => iterations::run(args),
        Command::Costmodel(args) => costmodel::run(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("{err}");
            match err {
                CliError::Usage(_) => 1,
                CliError::Data(_) => 2,
                CliError::Invariant(_) => 3,
            }
        }
    }
}

/// Writes text to a file, or stdout when no path is given.
pub fn write_output(path: &Option<PathBuf>, contents: &str) -> CliResult {
    match path {
        Some(p) => std::fs::write(p, contents)
            .map_err(|e| CliError::Data(anyhow::anyhow!("writing {}: {e}", p.display()))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
