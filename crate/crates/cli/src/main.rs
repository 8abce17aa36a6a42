//! `gda`: extract, evaluate, check and inspect.
//!
//! Exit codes: 0 success, 1 processing failure (malformed content), 2 usage
//! or configuration error (missing paths, empty truth).

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CheckArgs, EvaluateArgs, ExtractArgs, InspectArgs};

#[derive(Debug, Parser)]
#[command(name = "gda", version, about = "Gene/miRNA-disease expression association extractor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract records from a parsed corpus.
    Extract(ExtractArgs),
    /// Extract (or read predictions) and score against a truth table.
    Evaluate(EvaluateArgs),
    /// Parse and validate pattern and lexicon files, and optionally inputs.
    Check(CheckArgs),
    /// Show the tree, mentions and pattern trace for one sentence.
    Inspect(InspectArgs),
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    Processing(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Processing(_) => 1,
            Failure::Config(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GDA_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Extract(a) => commands::extract(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Check(a) => commands::check(a),
        Command::Inspect(a) => commands::inspect(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Config(e) | Failure::Processing(e)) = &f;
            eprintln!("error: {e:#}");
            ExitCode::from(f.code())
        }
    }
}
