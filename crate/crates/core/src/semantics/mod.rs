//! Finite models, the satisfaction relation, and bounded model enumeration.

mod enumerate;
mod eval;
mod model;
mod model_file;
mod signature;
mod validity;

use thiserror::Error;

pub use enumerate::{
    enumerate_models, for_each_model, ModelBounds, ModelEnumerator, MAX_MODELS_LOG2,
};
pub use eval::{evaluate, evaluate_trace, satisfying_state_names, CompiledFormula};
pub use model::{KripkeModel, TraceModel, MAX_STATES};
pub use model_file::{parse_model_file, render_model_file};
pub use signature::{Assignment, GroundAtom, Signature};
pub use validity::{
    all_assignments, check_validity, check_validity_at, find_model, CheckAt, Counterexample,
    ValidityOutcome, Witness,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{predicate}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("constant `{0}` is not in the domain")]
    UnknownConstant(String),
    #[error("state index {index} out of range for {len} state(s)")]
    StateOutOfRange { index: usize, len: usize },
    #[error("{0} states exceeds the limit of 64")]
    TooManyStates(usize),
    #[error("a model needs at least one state")]
    NoStates,
    #[error("atom id {0} out of range")]
    UnknownAtomId(usize),
    #[error("predicate `{0}` declared twice")]
    DuplicatePredicate(String),
    #[error("constant `{0}` declared twice")]
    DuplicateConstant(String),
    #[error("too many ground atoms")]
    TooManyAtoms,
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("refusing to enumerate 2^{log2_models} models at {states} state(s) (limit 2^40)")]
    BoundOverflow { states: usize, log2_models: usize },
    #[error("model file line {line}: {message}")]
    ModelFile { line: usize, message: String },
}
