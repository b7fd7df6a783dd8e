//! `gcrd`: greatest common right divisors of polynomial matrices from the
//! command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "gcrd", version, about = "Greatest common right divisors of polynomial matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Numeric,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Form {
    Hermite,
    Smith,
    Staircase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Experiment {
    Bitmead,
    ParamK,
    RandomTable,
    ToleranceSensitivity,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a GCRD of the blocks in an input file.
    Gcrd {
        input: PathBuf,
        /// Relative rank tolerance (numeric engine).
        #[arg(long)]
        tol: Option<f64>,
        /// Number of divisor rows; defaults to the normal rank.
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long, value_enum, default_value_t = Engine::Numeric)]
        engine: Engine,
        /// Skip the split of the right Kronecker part from the finite part.
        /// With `false`, the report includes zeros found by the staircase.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        skip_stage2: bool,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce one of the built-in experiments as CSV.
    Experiment {
        #[arg(value_enum)]
        name: Experiment,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        /// Number of random instances.
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Exponents of 10 for the parameter sweep, as `lo..=hi`.
        #[arg(long, default_value_t = 1)]
        k_min: i32,
        #[arg(long, default_value_t = 14)]
        k_max: i32,
        /// CSV path; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Hermite or Smith form (rational inputs) or staircase structure.
    NormalForm {
        input: PathBuf,
        #[arg(long, value_enum)]
        form: Form,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the numeric engine against the exact one (rational
    /// inputs) or report diagnostics of the numeric result (complex inputs).
    Verify {
        input: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gcrd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
