use std::fmt;
use std::time::{Duration, Instant};

use crate::dataset::GroundedProperty;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Satisfied,
    Unsatisfied,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Satisfied => "Satisfied",
            Status::Unsatisfied => "Unsatisfied",
        })
    }
}

impl std::str::FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Satisfied" => Ok(Status::Satisfied),
            "Unsatisfied" => Ok(Status::Unsatisfied),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleRow {
    /// Row ids bound by the failing instance.
    pub rows: Vec<String>,
    /// Position of the instance among the top-level clauses.
    pub clause_index: usize,
    pub clause: String,
    /// (atom, value) for every atom of the clause.
    pub valuation: Vec<(String, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerdictStats {
    pub rows_checked: u64,
    pub pairs_checked: u64,
    pub skipped_rows: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub property: String,
    pub status: Status,
    pub counterexamples: Vec<CounterexampleRow>,
    pub stats: VerdictStats,
    /// True when every row was skipped and the property held only vacuously.
    pub vacuous: bool,
}

/// Decides a grounded property by evaluating its circuit. Every failing top-level clause of a
/// universal property becomes one counterexample.
pub fn check_grounded(g: &GroundedProperty) -> Verdict {
    let start = Instant::now();
    let holds = g.eval();
    let mut counterexamples = Vec::new();
    if !holds {
        for (k, (rows, node)) in g.top_level().into_iter().enumerate() {
            if node.eval(&g.atoms) {
                continue;
            }
            counterexamples.push(CounterexampleRow {
                rows: rows.iter().map(|&r| g.row_ids[r].clone()).collect(),
                clause_index: k,
                clause: node.render(&g.atoms),
                valuation: node
                    .atom_ids()
                    .into_iter()
                    .map(|a| (g.atoms[a].to_string(), g.atoms[a].value))
                    .collect(),
            });
        }
    }
    let (rows_checked, pairs_checked) = g.instance_counts();
    Verdict {
        property: g.id.clone(),
        status: if holds {
            Status::Satisfied
        } else {
            Status::Unsatisfied
        },
        counterexamples,
        stats: VerdictStats {
            rows_checked,
            pairs_checked,
            skipped_rows: g.skipped.len(),
            elapsed: start.elapsed(),
        },
        vacuous: holds && g.domain.is_empty(),
    }
}
