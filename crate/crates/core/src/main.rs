use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use twoseg::Error;
use twoseg::acceptance::{DEFAULT_SEED, run_all};
use twoseg::cli::{
    CheckSelection, DEFAULT_LEVEL, Direction, EXAMPLES, LEVEL_ENV, StructureDocument, cmd_check,
    cmd_derive, cmd_example, cmd_search_lift,
};

#[derive(Parser)]
#[command(
    name = "twoseg",
    version,
    about = "Check 2-Segal sets and the structures they carry in spans of finite sets"
)]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checkers on a structure document; with no flags, every applicable one.
    Check {
        path: PathBuf,
        #[arg(long = "2segal")]
        two_segal: bool,
        #[arg(long)]
        unitality: bool,
        #[arg(long)]
        subdivisions: bool,
        #[arg(long)]
        paracyclic: bool,
        #[arg(long)]
        gamma: bool,
        #[arg(long)]
        frobenius: bool,
        /// Also run the span-level symmetry and hexagon equations.
        #[arg(long)]
        full_hexagon: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Derive one structure from another and print the new document.
    Derive {
        path: PathBuf,
        #[arg(long, value_enum)]
        direction: DirectionArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for an associator satisfying the pentagon on a 2-truncation.
    SearchLift {
        path: PathBuf,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u128,
    },
    /// Print a catalog example as a structure document.
    Example {
        /// Example name; `--list` shows them.
        name: Option<String>,
        #[arg(long)]
        param: Option<usize>,
        #[arg(long, env = LEVEL_ENV, default_value_t = DEFAULT_LEVEL)]
        level: usize,
        #[arg(long)]
        list: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance criteria and print one line per criterion.
    Acceptance {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    FrobeniusToParacyclic,
    ParacyclicToFrobenius,
    GammaToCommutative,
    CommutativeToGamma,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::FrobeniusToParacyclic => Direction::FrobeniusToParacyclic,
            DirectionArg::ParacyclicToFrobenius => Direction::ParacyclicToFrobenius,
            DirectionArg::GammaToCommutative => Direction::GammaToCommutative,
            DirectionArg::CommutativeToGamma => Direction::CommutativeToGamma,
        }
    }
}

/// Exit status for a library error: structural verdicts are check failures,
/// everything else is bad input.
fn status(e: &Error) -> u8 {
    match e {
        Error::NotTwoSegal { .. }
        | Error::NotFrobenius(_)
        | Error::NotCommutative(_)
        | Error::Gluing(_) => 1,
        _ => 2,
    }
}

fn fail(e: Error, text: Option<&str>) -> ExitCode {
    eprintln!("error: {e}");
    if let (Error::Json(j), Some(text)) = (&e, text)
        && let Some(line) = text.lines().nth(j.line().saturating_sub(1))
    {
        eprintln!("  {:>5} | {line}", j.line());
    }
    ExitCode::from(status(&e))
}

fn load(path: &Path) -> Result<StructureDocument, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(e.into(), None))?;
    StructureDocument::parse(&text).map_err(|e| fail(e, Some(&text)))
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(text: &str, output: Option<&Path>) -> ExitCode {
    match output {
        Some(p) => match std::fs::write(p, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e.into(), None),
        },
        None => {
            out(text);
            ExitCode::SUCCESS
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    Ok(match cli.command {
        Command::Check {
            path,
            two_segal,
            unitality,
            subdivisions,
            paracyclic,
            gamma,
            frobenius,
            full_hexagon,
            json,
        } => {
            let doc = load(&path)?;
            let sel = CheckSelection {
                two_segal,
                unitality,
                subdivisions,
                paracyclic,
                gamma,
                frobenius,
                full_hexagon,
            };
            let report = cmd_check(&doc, sel).map_err(|e| fail(e, None))?;
            if json {
                out(&(serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"));
            } else {
                out(&report.table());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Derive {
            path,
            direction,
            output,
        } => {
            let doc = load(&path)?;
            let derived = cmd_derive(&doc, direction.into()).map_err(|e| fail(e, None))?;
            emit(&derived.to_json(), output.as_deref())
        }
        Command::SearchLift { path, budget } => {
            let doc = load(&path)?;
            let (verdict, code) = cmd_search_lift(&doc, budget).map_err(|e| fail(e, None))?;
            out(&(serde_json::to_string_pretty(&verdict).expect("verdicts serialize") + "\n"));
            ExitCode::from(code as u8)
        }
        Command::Example {
            name,
            param,
            level,
            list,
            output,
        } => {
            if list || name.is_none() {
                for (n, d) in EXAMPLES {
                    out(&format!("{n:<16} {d}\n"));
                }
                return Ok(ExitCode::SUCCESS);
            }
            let doc = cmd_example(name.as_deref().unwrap_or_default(), param, level)
                .map_err(|e| fail(e, None))?;
            emit(&doc.to_json(), output.as_deref())
        }
        Command::Acceptance { json } => {
            let results = run_all(cli.seed);
            if json {
                out(&(serde_json::to_string_pretty(&results).expect("results serialize") + "\n"));
            } else {
                for r in &results {
                    out(&format!("{r}\n"));
                }
            }
            if results.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    })
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|code| code)
}
