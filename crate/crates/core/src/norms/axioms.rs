use crate::formula::{free_variables, parse_formula, Formula};

use super::NormError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSchema {
    pub id: &'static str,
    /// As written; may have free `x`, `a`, `c`.
    pub formula: Formula,
    pub prose: &'static str,
}

impl AxiomSchema {
    /// Universal closure over the free variables, in name order.
    pub fn closed(&self) -> Formula {
        free_variables(&self.formula)
            .into_iter()
            .rev()
            .fold(self.formula.clone(), |f, v| Formula::forall(v, f))
    }
}

const AXIOMS: &[(&str, &str, &str)] = &[
    (
        "A1.1",
        "forall x. forall a. (ethical(x) -> O(performs(x,a) & ethical_action(a)))",
        "an ethical system is obliged to carry out ethical actions",
    ),
    (
        "A1.2",
        "forall x. forall a. (ethical(x) -> !P(performs(x,a) & !ethical_action(a)))",
        "an ethical system may not carry out unethical actions",
    ),
    (
        "A1.3",
        "forall x. forall a. (ethical(x) -> P(performs(x,a) & ethical_action(a)))",
        "an ethical system may carry out ethical actions",
    ),
    (
        "A1.4",
        "guidelines(x) -> forall a. ethical_action(a)",
        "following guidelines makes every action ethical",
    ),
    (
        "A2.1",
        "[](O(fair(x)))",
        "fairness is obligatory at every time",
    ),
    (
        "A2.2",
        "bias(x) -> !ethical(x)",
        "a biased system is not ethical",
    ),
    (
        "A2.3",
        "!bias(x) U fair(x)",
        "the system stays unbiased until fairness is reached",
    ),
    (
        "A2.4",
        "!([](fair_train(x) -> fair_deploy(x)))",
        "training-time fairness need not carry over to deployment",
    ),
    ("A2.5", "!fair(x) -> bias(x)", "an unfair system is biased"),
    (
        "A3.1",
        "transparent(x) -> ethical(x)",
        "transparency suffices for ethics",
    ),
    (
        "A3.2",
        "cf(x,c) -> !bias(x)",
        "counterfactual fairness rules out bias",
    ),
    (
        "A3.3",
        "retrofit_xai(x) -> ethical(x)",
        "after-the-fact explanations suffice for ethics",
    ),
];

/// Every axiom schema in id order.
pub fn axioms() -> Vec<AxiomSchema> {
    AXIOMS
        .iter()
        .map(|&(id, src, prose)| AxiomSchema {
            id,
            formula: parse_formula(src).expect("built-in axiom parses"),
            prose,
        })
        .collect()
}

pub fn axiom(id: &str) -> Result<AxiomSchema, NormError> {
    axioms()
        .into_iter()
        .find(|a| a.id == id)
        .ok_or_else(|| NormError::UnknownAxiom(id.to_string()))
}

/// The schema's formula as written.
pub fn axiom_formula(id: &str) -> Result<Formula, NormError> {
    axiom(id).map(|a| a.formula)
}
