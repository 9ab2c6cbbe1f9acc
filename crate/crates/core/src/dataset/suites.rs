use crate::formula::{parse_formula, Formula};

use super::{DatasetError, System};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub id: String,
    pub formula: Formula,
    pub description: String,
}

fn build(table: &[(&str, &str, &str)]) -> Vec<Property> {
    table
        .iter()
        .map(|&(id, src, description)| Property {
            id: id.to_string(),
            formula: parse_formula(src).expect("built-in property parses"),
            description: description.to_string(),
        })
        .collect()
}

const COMPAS: &[(&str, &str, &str)] = &[
    (
        "a",
        "P(forall i. priors(i) -> assess(i))",
        "individuals with prior offenses may be assessed",
    ),
    (
        "b",
        "forall i. recid(i) -> assess(i)",
        "a recidivist label is backed by a decile score at or above the threshold",
    ),
    (
        "c",
        "forall i,j. flip(i,j) -> (recid(i) <-> recid(j))",
        "changing only sensitive attributes never changes the label",
    ),
    (
        "d",
        "forall i. !priors(i) -> Forb(recid(i))",
        "no recidivist label without prior offenses",
    ),
    (
        "e",
        "P(forall i. recid(i) -> appeal(i))",
        "labelled individuals may appeal",
    ),
];

const LOAN: &[(&str, &str, &str)] = &[
    (
        "a",
        "O(forall i. applied(i) -> (approved(i) | !approved(i)))",
        "every application gets a decision",
    ),
    (
        "b",
        "forall i. (credit_ok(i) | income_ok(i)) -> approved(i)",
        "credit or income above threshold leads to approval",
    ),
    (
        "c",
        "O(forall i,j. similar(i,j) -> (approved(i) <-> approved(j)))",
        "applicants with equal nonsensitive values get equal outcomes",
    ),
    (
        "d",
        "forall i,j. flip(i,j) -> (approved(i) <-> approved(j))",
        "changing only sensitive attributes never changes the outcome",
    ),
    (
        "e",
        "P(forall i. !approved(i) -> appeal(i))",
        "rejected applicants may appeal",
    ),
];

pub fn compas_suite() -> Vec<Property> {
    build(COMPAS)
}

pub fn loan_suite() -> Vec<Property> {
    build(LOAN)
}

pub fn suite(system: System) -> Vec<Property> {
    match system {
        System::Compas => compas_suite(),
        System::Loan => loan_suite(),
    }
}

/// Parses a custom suite: one `id: formula` per line, `#` comments.
pub fn parse_suite(text: &str) -> Result<Vec<Property>, DatasetError> {
    let mut out: Vec<Property> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = crate::formula::strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (id, src) = line.split_once(':').ok_or_else(|| {
            DatasetError::Suite(format!("line {}: expected `id: formula`", n + 1))
        })?;
        let id = id.trim();
        if id.is_empty() || out.iter().any(|p| p.id == id) {
            return Err(DatasetError::Suite(format!(
                "line {}: missing or duplicate id `{id}`",
                n + 1
            )));
        }
        let formula =
            parse_formula(src).map_err(|e| DatasetError::Suite(format!("line {}: {e}", n + 1)))?;
        out.push(Property {
            id: id.to_string(),
            formula,
            description: String::new(),
        });
    }
    if out.is_empty() {
        return Err(DatasetError::Suite("no properties".into()));
    }
    Ok(out)
}
