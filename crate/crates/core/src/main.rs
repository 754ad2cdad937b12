//! Command-line driver. Exit codes: 0 success, 1 verification failure, 2 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use apollonia::io::{
    emit_svg, from_json, parse_problem, run_oracle, run_solve, verify, ProblemFile, ProblemKind,
    ResultFile, SolverOptions,
};
use apollonia::oracle::{random_instance, InstanceKind};
use apollonia::threeball::Model;

#[derive(Parser)]
#[command(
    name = "apollonia",
    version,
    about = "Smallest ball enclosing and meeting given balls, and Fermat-Torricelli points of balls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolverFlags {
    /// Certificate tolerance for the iterative solver.
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration budget for the iterative solver.
    #[arg(long)]
    max_iter: Option<usize>,
}

impl SolverFlags {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and print the result file.
    Solve {
        problem: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a result file against its problem; exit 1 if any check fails.
    Verify {
        problem: PathBuf,
        result: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force minimum by nested grid search.
    Oracle {
        problem: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a planar problem and its solution as SVG; solves first unless a result is given.
    Plot {
        problem: PathBuf,
        #[arg(long)]
        result: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded random problem file.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Dimension of a general instance.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Number of balls to enclose in a general instance.
        #[arg(long, default_value_t = 2)]
        enclose: usize,
        /// Number of balls to intersect in a general instance.
        #[arg(long, default_value_t = 2)]
        intersect: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    ModelI,
    ModelIi,
    ModelIii,
    ModelIv,
    Ft,
    General,
}

enum Failure {
    Input(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<ProblemFile, Failure> {
    parse_problem(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            problem,
            solver,
            out,
        } => {
            let p = load_problem(&problem)?;
            let r = run_solve(&p, &solver.options())?;
            for note in &r.notes {
                eprintln!("note: {note}");
            }
            emit(&json(&r), out.as_deref())
        }
        Command::Verify {
            problem,
            result,
            out,
        } => {
            let p = load_problem(&problem)?;
            let r: ResultFile = from_json(&read(&result)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", result.display())))?;
            let report = verify(&p, &r)?;
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("failed {}: {}", c.name, c.detail);
            }
            emit(&json(&report), out.as_deref())?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Oracle { problem, out } => {
            let p = load_problem(&problem)?;
            emit(&json(&run_oracle(&p)?), out.as_deref())
        }
        Command::Plot {
            problem,
            result,
            solver,
            out,
        } => {
            let p = load_problem(&problem)?;
            let r = match result {
                Some(path) => from_json(&read(&path)?)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
                None => run_solve(&p, &solver.options())?,
            };
            emit(&emit_svg(&p, &r)?, out.as_deref())
        }
        Command::Gen {
            family,
            seed,
            dim,
            enclose,
            intersect,
            out,
        } => {
            let (kind, inst_kind) = match family {
                Family::ModelI => (
                    ProblemKind::Sylvester,
                    InstanceKind::Model { model: Model::I },
                ),
                Family::ModelIi => (
                    ProblemKind::Sylvester,
                    InstanceKind::Model { model: Model::II },
                ),
                Family::ModelIii => (
                    ProblemKind::Sylvester,
                    InstanceKind::Model { model: Model::III },
                ),
                Family::ModelIv => (
                    ProblemKind::Sylvester,
                    InstanceKind::Model { model: Model::IV },
                ),
                Family::Ft => (ProblemKind::FermatTorricelli, InstanceKind::Ft),
                Family::General => {
                    if dim == 0 || enclose + intersect == 0 {
                        return Err(Failure::Input(
                            "a general instance needs dimension and ball count at least 1".into(),
                        ));
                    }
                    (
                        ProblemKind::Sylvester,
                        InstanceKind::General {
                            dim,
                            enclose,
                            intersect,
                        },
                    )
                }
            };
            let file = ProblemFile::from_instance(kind, &random_instance(seed, inst_kind));
            let mut text = file.to_json();
            text.push('\n');
            emit(&text, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
