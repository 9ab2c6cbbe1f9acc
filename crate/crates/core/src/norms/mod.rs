//! Axiom schemas, theorem obligations and their bounded semantic check.

mod axioms;
mod theorems;
mod vocabulary;

use thiserror::Error;

use crate::semantics::SemanticsError;

pub use axioms::{axiom, axiom_formula, axioms, AxiomSchema};
pub use theorems::{
    check_a24, render_theorem_report, theorem_spec, theorem_specs, validate_all, validate_spec,
    validate_theorem, ExpectedStatus, Placement, Premise, PremiseSource, TheoremBounds,
    TheoremSpec, TheoremStatus, ValidationReport, THEOREM_IDS,
};
pub use vocabulary::{describe, ethics_vocabulary, DOMAIN_CONSTANT};

#[derive(Debug, Error)]
pub enum NormError {
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("unknown theorem `{0}`")]
    UnknownTheorem(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}
