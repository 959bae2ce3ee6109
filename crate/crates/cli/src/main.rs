//! `shadowclass`: generate, preprocess, train, evaluate and report.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data, I/O or
//! dimension error, 3 numerical failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shadowclass_core::Error;

use config::{FileConfig, Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "shadowclass",
    version,
    about = "Classical-shadow Z2/Z3 phase classifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic measurement dataset.
    Generate,
    /// Shadow expectations, PCA and angle scaling; writes the pipeline model and features.
    Preprocess,
    /// Fit the feature pipeline and train the classifier; writes the report and epoch table.
    Train,
    /// Score a dataset with a saved pipeline model and trained weights.
    Evaluate,
    /// Turn a saved report into plot-ready CSV tables.
    Report,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Flat TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Global seed from which every random stream is derived.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Dataset file (default: <out>/dataset.jsonl).
    #[arg(long, global = true)]
    dataset: Option<PathBuf>,
    /// Output directory (default: out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Pipeline model file (default: <out>/pipeline_model.json).
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// Training report file (default: <out>/report.json).
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Density reconstruction used for the shadow expectations.
    #[arg(long, global = true, value_parser = ["paper", "unbiased"])]
    mode: Option<String>,
    /// Score epochs and splits with exact expectations instead of sampled ones.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    exact_eval: Option<bool>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 1,
        Error::Numerical(_) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let g = cli.global;
    let file = match &g.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let cfg = RunConfig::resolve(
        file,
        Overrides {
            seed: g.seed,
            out: g.out,
            dataset: g.dataset,
            model: g.model,
            report: g.report,
            mode: g.mode,
            exact_eval: g.exact_eval,
        },
    )?;
    match cli.command {
        Command::Generate => commands::generate(&cfg),
        Command::Preprocess => commands::preprocess_cmd(&cfg),
        Command::Train => commands::train(&cfg),
        Command::Evaluate => commands::evaluate(&cfg),
        Command::Report => commands::report(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
