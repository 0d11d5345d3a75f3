//! `piso`: classify, compose and verify partial isometries from the command
//! line.
//!
//! Exit codes: 0 success, 1 property failure, 2 unreadable or malformed
//! input, 3 shape mismatch, 4 violated precondition, 64 usage error.

mod commands;
mod error;
mod input;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use piso::linalg::Tolerance;

use crate::commands::Mode;
use crate::error::{code, CliError};

#[derive(Parser)]
#[command(
    name = "piso",
    version,
    about = "Partial isometries and partially defined isometries"
)]
struct Cli {
    /// Equality tolerance; overrides PISO_TOL.
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a matrix, partial function, module map or PDI.
    Classify {
        file: PathBuf,
        /// Print a JSON document instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Compose two inputs: `v` after `w`.
    Compose {
        v: PathBuf,
        w: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        mode: Mode,
        /// Write the result here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace each operator by its nearest partial isometry first.
        #[arg(long)]
        reproject: bool,
    },
    /// The partial isometry contained in a contraction.
    Contained {
        file: PathBuf,
        /// Treat a matrix as a map of Hilbert modules over the scalars.
        #[arg(long)]
        module: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run randomized property suites.
    Verify {
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Largest dimension drawn, in [1, 16].
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the JSON report instead of the table.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock durations (makes reports differ between runs).
        #[arg(long)]
        timing: bool,
    },
    /// Re-run the failures recorded in a report or failure file.
    Replay { file: PathBuf },
}

fn tolerance(flag: Option<f64>) -> Result<Tolerance, CliError> {
    let eq = match (flag, std::env::var("PISO_TOL")) {
        (Some(x), _) => Some(x),
        (None, Ok(s)) => Some(
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("PISO_TOL={s:?} is not a number")))?,
        ),
        (None, Err(_)) => None,
    };
    match eq {
        Some(eq) => Ok(Tolerance::default().with_eq(eq)?),
        None => Ok(Tolerance::default()),
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let tol = tolerance(cli.tol)?;
    match cli.command {
        Command::Classify { file, json } => {
            commands::classify_cmd(&input::load(&file, &tol)?, json, &tol)
        }
        Command::Compose {
            v,
            w,
            mode,
            out,
            reproject,
        } => {
            let (v, w) = (input::load(&v, &tol)?, input::load(&w, &tol)?);
            commands::compose_cmd(&v, &w, mode, out.as_deref(), reproject, &tol)
        }
        Command::Contained { file, module, out } => {
            commands::contained_cmd(&input::load(&file, &tol)?, module, out.as_deref(), &tol)
        }
        Command::Verify {
            suite,
            trials,
            dim,
            seed,
            json,
            out,
            timing,
        } => {
            let config = verify::VerifyConfig {
                suite,
                trials,
                dim,
                seed,
                tol,
            };
            let report = verify::run(&config, timing)?;
            if json {
                print!("{}", input::to_json(&report));
            } else {
                verify::print_table(&report);
            }
            if let Some(path) = out {
                input::write_json(&path, &report)?;
            }
            Ok(if report.passed {
                code::PASS
            } else {
                code::FAILURE
            })
        }
        Command::Replay { file } => {
            let entries = verify::failure_entries(input::read_json(&file)?)?;
            verify::replay(&entries)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(code::USAGE),
            };
        }
    };
    match run(cli) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
