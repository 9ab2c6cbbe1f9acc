//! Verdicts for grounded properties, SMT-LIB output, and counterexample explanations.

mod explain;
mod smtlib;
mod solver;
mod verdict;

use thiserror::Error;

use crate::dataset::DatasetError;

pub use explain::{explain, replay, AtomClaim, ExplanationStep, ExplanationTrace, StepRule};
pub use smtlib::{atom_symbols, emit_smtlib, parse_solver_result, SolverAnswer, SolverStatus};
pub use solver::{run_solver, solver_from_env, SOLVER_ENV};
pub use verdict::{check_grounded, CounterexampleRow, Status, Verdict, VerdictStats};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("property {0} is satisfied; there is no counterexample to explain")]
    NothingToExplain(String),
    #[error("solver answered unknown")]
    SolverUnknown,
    #[error("unreadable solver output: {0}")]
    SolverOutput(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error("replay: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}
