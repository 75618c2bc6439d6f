//! `ambistl`: translate navigation commands into ranked STL candidates.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ambistl", version, about = "Ambiguity-preserving translation of navigation commands into STL")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Config {
    /// Lexicon file to use instead of the bundled one.
    #[arg(long, global = true, env = "AMBISTL_LEXICON", value_name = "PATH")]
    pub lexicon: Option<PathBuf>,
    /// Number of derivations kept per sentence.
    #[arg(long, global = true, default_value_t = ambistl_core::DEFAULT_N_BEST,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub n_best: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// More detail on stderr; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the ranked candidate formulas for a sentence.
    Translate { sentence: String },
    /// Translate every sentence of a corpus, optionally checking expectations.
    ///
    /// Without CORPUS the bundled S1-S12 corpus is used, checked against the
    /// bundled expectations unless --expect names another file.
    Corpus {
        corpus: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        expect: Option<PathBuf>,
    },
    /// Evaluate each candidate's robustness on a trajectory.
    Eval {
        sentence: String,
        #[arg(long, value_name = "PATH")]
        trajectory: PathBuf,
        #[arg(long, value_name = "PATH")]
        regions: PathBuf,
    },
    /// Show every derivation, grouped by the candidate it produces.
    Explain { sentence: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((out, e)) => {
            print!("{out}");
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("\nFor more information, try '--help'.");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
