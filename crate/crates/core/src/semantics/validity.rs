use std::collections::BTreeSet;
use std::ops::ControlFlow;

use super::enumerate::{for_each_model, ModelBounds};
use super::eval::CompiledFormula;
use super::model::bits;
use super::{Assignment, KripkeModel, SemanticsError};
use crate::formula::{free_variables, Formula};

/// Which states a premises/conclusion pair is checked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckAt {
    #[default]
    EveryState,
    /// Only state `s0`.
    InitialState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub model: KripkeModel,
    pub state: usize,
    pub assignment: Assignment,
    /// Models examined up to and including this one.
    pub models_checked: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidityOutcome {
    ValidUpToBounds { models_checked: u64 },
    Counterexample(Box<Counterexample>),
}

impl ValidityOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidityOutcome::ValidUpToBounds { .. })
    }

    pub fn models_checked(&self) -> u64 {
        match self {
            ValidityOutcome::ValidUpToBounds { models_checked } => *models_checked,
            ValidityOutcome::Counterexample(c) => c.models_checked,
        }
    }
}

/// Every assignment of `vars` to domain constants, in lexicographic order.
pub fn all_assignments(vars: &BTreeSet<String>, domain: &[String]) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|a| {
                domain
                    .iter()
                    .map(move |d| a.clone().with(v.clone(), d.clone()))
            })
            .collect();
    }
    out
}

/// Searches the bounded model class for a state (and assignment of free variables) where every
/// premise holds and the conclusion fails.
pub fn check_validity(
    premises: &[Formula],
    conclusion: &Formula,
    bounds: &ModelBounds,
) -> Result<ValidityOutcome, SemanticsError> {
    check_validity_at(premises, conclusion, bounds, CheckAt::EveryState)
}

pub fn check_validity_at(
    premises: &[Formula],
    conclusion: &Formula,
    bounds: &ModelBounds,
    at: CheckAt,
) -> Result<ValidityOutcome, SemanticsError> {
    let mut vars = free_variables(conclusion);
    for p in premises {
        vars.extend(free_variables(p));
    }
    let sig = &bounds.signature;
    let mut compiled = Vec::new();
    for sigma in all_assignments(&vars, sig.domain()) {
        let ps = premises
            .iter()
            .map(|p| CompiledFormula::compile(p, sig, &sigma))
            .collect::<Result<Vec<_>, _>>()?;
        let c = CompiledFormula::compile(conclusion, sig, &sigma)?;
        compiled.push((sigma, ps, c));
    }

    let mut scratch = Vec::new();
    let mut found: Option<(KripkeModel, usize, Assignment)> = None;
    let visited = for_each_model(bounds, |m| {
        let scope = match at {
            CheckAt::EveryState => m.all_states(),
            CheckAt::InitialState => 1,
        };
        for (sigma, ps, c) in &compiled {
            let mut holds = scope;
            for p in ps {
                holds &= p.satisfying_states_with(m, &mut scratch);
                if holds == 0 {
                    break;
                }
            }
            if holds == 0 {
                continue;
            }
            let bad = holds & !c.satisfying_states_with(m, &mut scratch);
            if let Some(s) = bits(bad).next() {
                found = Some((m.clone(), s, sigma.clone()));
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;

    Ok(match found {
        Some((model, state, assignment)) => {
            ValidityOutcome::Counterexample(Box::new(Counterexample {
                model,
                state,
                assignment,
                models_checked: visited,
            }))
        }
        None => ValidityOutcome::ValidUpToBounds {
            models_checked: visited,
        },
    })
}

/// A model, a state in it, and an assignment of free variables.
pub type Witness = (KripkeModel, usize, Assignment);

/// First model and state satisfying `f`, if any, with the number of models examined.
pub fn find_model(
    f: &Formula,
    bounds: &ModelBounds,
    at: CheckAt,
) -> Result<(Option<Witness>, u64), SemanticsError> {
    match check_validity_at(
        std::slice::from_ref(f),
        &Formula::not(f.clone()),
        bounds,
        at,
    )? {
        ValidityOutcome::ValidUpToBounds { models_checked } => Ok((None, models_checked)),
        ValidityOutcome::Counterexample(c) => {
            Ok((Some((c.model, c.state, c.assignment)), c.models_checked))
        }
    }
}
