//! Command-line surface: spec ingestion, verbs and reports.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical check failure,
//! 2 on usage or parse errors.

pub mod catalog;
pub mod commands;
pub mod report;
pub mod spec_doc;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::Options;
pub use report::Outcome;
pub use spec_doc::{parse_document, resolve, GroupSpecDocument};

use crate::chartab::DEFAULT_CHARTAB_SEED;
use crate::narygroup::PolyadicGroup;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// The input is well formed but describes something that is not a group. Exit code 1.
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "polyadic", version, about = "Finite polyadic groups, Post covers and their characters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for sampling and for the character-table solver.
    #[arg(long, global = true, default_value_t = DEFAULT_CHARTAB_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Verify axioms on this many sampled tuples instead of the default policy.
    #[arg(long, global = true)]
    pub sample: Option<usize>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// JSON group specification.
    pub spec: Option<PathBuf>,
    /// Use a catalog group instead of a file.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the n-ary group axioms and the skew identities.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Build the Post cover and verify the coset theorem and inverse formula.
    Cover {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "all_anchors")]
        anchor: Option<usize>,
        /// Build the cover at every anchor and compare them.
        #[arg(long)]
        all_anchors: bool,
        /// Write the cover Cayley table(s) as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Print the character table of the cover and the polyadic characters.
    Chartab {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        anchor: usize,
    },
    /// Degree, orthogonality, round-trip and anchor-invariance checks.
    VerifyTheorems {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        anchor: usize,
    },
    /// List the built-in groups.
    Catalog,
}

pub fn load(input: &Input) -> Result<PolyadicGroup, CliError> {
    let doc = match (&input.spec, &input.builtin) {
        (_, Some(name)) => GroupSpecDocument::Builtin { name: name.clone() },
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            parse_document(&text)?
        }
        (None, None) => return Err(CliError::Usage("a spec file or --builtin is required".into())),
    };
    resolve(&doc)
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = Options { seed: cli.seed, sample: cli.sample };
    if cli.sample == Some(0) {
        return Err(CliError::Usage("--sample must be positive".into()));
    }
    match &cli.command {
        Command::Validate { input } => Ok(commands::validate(&load(input)?, &opts)),
        Command::Cover { input, anchor, all_anchors, dump } => {
            commands::cover(&load(input)?, *anchor, *all_anchors, dump.as_deref(), &opts)
        }
        Command::Chartab { input, anchor } => commands::chartab(&load(input)?, *anchor, &opts),
        Command::VerifyTheorems { input, anchor } => commands::verify_theorems(&load(input)?, *anchor, &opts),
        Command::Catalog => Ok(commands::catalog()),
    }
}

/// Runs a parsed command line, printing the report. Returns the exit code.
pub fn run(cli: Cli) -> ExitCode {
    let start = std::time::Instant::now();
    match execute(&cli) {
        Ok(outcome) => {
            match cli.format {
                Format::Text => print!("{}", outcome.text),
                Format::Json => {
                    let mut json = outcome.json;
                    if let Some(obj) = json.as_object_mut() {
                        obj.insert("elapsed_ms".into(), serde_json::json!(start.elapsed().as_millis() as u64));
                    }
                    println!("{}", serde_json::to_string_pretty(&json).expect("report serialises"));
                }
            }
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!("{}", serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() })),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
