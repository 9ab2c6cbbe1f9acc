use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use deontic_audit::audit::{
    run_audit, run_check, run_emit, run_theorems, AuditError, AuditRequest, DEFAULT_CAP,
};
use deontic_audit::dataset::{Mode, System};
use deontic_audit::engine::solver_from_env;
use deontic_audit::norms::TheoremBounds;

#[derive(Parser)]
#[command(
    name = "deontic-audit",
    version,
    about = "Deontic-temporal audits of tabular decision data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a property suite against a dataset. Exit 0 if all hold, 1 if any fails.
    Audit {
        #[arg(long)]
        suite: System,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "reproduction")]
        mode: Mode,
        /// Replace the built-in properties with those in this file.
        #[arg(long)]
        properties: Option<PathBuf>,
        /// Also write a CSV summary here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print every counterexample instead of the first ten.
        #[arg(long)]
        all: bool,
    },
    /// Bounded validity check of the theorem catalogue.
    Theorems {
        #[arg(long, default_value_t = TheoremBounds::default().max_states)]
        max_states: usize,
        #[arg(long, default_value_t = TheoremBounds::default().max_atoms)]
        max_atoms: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the SMT-LIB encoding of one property.
    Emit {
        #[arg(long)]
        suite: System,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        property: String,
        #[arg(long, default_value = "reproduction")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a closed formula on each state of a model file.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
    },
}

fn run(cli: Cli) -> Result<u8, AuditError> {
    match cli.command {
        Command::Audit {
            suite,
            data,
            config,
            mode,
            properties,
            report,
            all,
        } => {
            let req = AuditRequest {
                data,
                config,
                system: suite,
                mode,
                properties,
                solver: solver_from_env(),
            };
            let r = run_audit(&req)?;
            print!("{}", r.to_text(if all { None } else { Some(DEFAULT_CAP) }));
            if let Some(path) = report {
                std::fs::write(&path, r.to_csv()).map_err(|source| AuditError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
            }
            Ok(r.exit_code() as u8)
        }
        Command::Theorems {
            max_states,
            max_atoms,
            out,
        } => {
            let (_, text) = run_theorems(
                TheoremBounds {
                    max_states,
                    max_atoms,
                },
                out.as_deref(),
            )?;
            print!("{text}");
            Ok(0)
        }
        Command::Emit {
            suite,
            data,
            config,
            property,
            mode,
            out,
        } => {
            let text = run_emit(&data, &config, suite, &property, mode, out.as_deref())?;
            if out.is_none() {
                print!("{text}");
            }
            Ok(0)
        }
        Command::Check { model, formula } => {
            print!("{}", run_check(&model, &formula)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
