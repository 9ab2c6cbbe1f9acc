use std::collections::HashMap;
use std::fmt;

use crate::dataset::{
    usable_rows, Bindings, Dataset, GroundedAtom, GroundedProperty, Node, Quantified,
};
use crate::formula::{render_formula, Formula};

use super::{EngineError, Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    Negate,
    Monotonicity,
    AtomEval,
    Transitivity,
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepRule::Negate => "negate",
            StepRule::Monotonicity => "monotonicity",
            StepRule::AtomEval => "atom-eval",
            StepRule::Transitivity => "transitivity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomClaim {
    pub predicate: String,
    pub ids: Vec<String>,
    pub value: bool,
    pub evidence: String,
}

impl fmt::Display for AtomClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({}) = {} ({})",
            self.predicate,
            self.ids.join(","),
            self.value,
            self.evidence
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplanationStep {
    pub rule: StepRule,
    pub statement: String,
}

/// Refutation of one failing clause: negate the property, isolate the clause, read the atoms
/// off the dataset, and chain them into a contradiction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplanationTrace {
    pub property: String,
    pub formula: Formula,
    pub rows: Vec<String>,
    pub steps: Vec<ExplanationStep>,
    pub atoms: Vec<AtomClaim>,
    /// The isolated clause, over indices into `atoms`.
    pub clause: Node,
    pub conclusion: String,
}

impl fmt::Display for ExplanationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "  {}. [{}] {}", i + 1, s.rule, s.statement)?;
        }
        Ok(())
    }
}

fn remap(n: &Node, map: &HashMap<usize, usize>) -> Node {
    let q = |q: &Quantified| Quantified {
        vars: q.vars.clone(),
        omitted: q.omitted,
        instances: q
            .instances
            .iter()
            .map(|i| crate::dataset::Instance {
                rows: i.rows.clone(),
                body: remap(&i.body, map),
            })
            .collect(),
    };
    match n {
        Node::Const(b) => Node::Const(*b),
        Node::Atom(i) => Node::Atom(map[i]),
        Node::Not(a) => Node::Not(Box::new(remap(a, map))),
        Node::And(ns) => Node::And(ns.iter().map(|x| remap(x, map)).collect()),
        Node::Or(ns) => Node::Or(ns.iter().map(|x| remap(x, map)).collect()),
        Node::Implies(a, b) => Node::Implies(Box::new(remap(a, map)), Box::new(remap(b, map))),
        Node::Forall(x) => Node::Forall(q(x)),
        Node::Exists(x) => Node::Exists(q(x)),
    }
}

/// Observed facts of the atoms of `n`, joined.
fn evidence(n: &Node, atoms: &[GroundedAtom], multi_row: bool) -> String {
    let parts: Vec<String> = n
        .atom_ids()
        .into_iter()
        .map(|i| {
            let a = &atoms[i];
            if multi_row && a.ids.len() == 1 {
                format!("{} for {}", a.evidence, a.ids[0])
            } else {
                a.evidence.clone()
            }
        })
        .collect();
    parts.join(", ")
}

/// What `n` demands to be true.
fn requirement(n: &Node, atoms: &[GroundedAtom]) -> String {
    match n {
        Node::Atom(i) => atoms[*i].requirement.clone(),
        Node::Not(inner) => match &**inner {
            Node::Atom(i) => atoms[*i].negated_requirement.clone(),
            other => format!("not ({})", other.render(atoms)),
        },
        other => other.render(atoms),
    }
}

fn contradiction(clause: &Node, atoms: &[GroundedAtom], multi_row: bool) -> String {
    match clause {
        Node::Implies(a, b) => format!(
            "{} requires {}, found {}",
            evidence(a, atoms, multi_row),
            requirement(b, atoms),
            evidence(b, atoms, multi_row)
        ),
        other => format!(
            "{} is false: {}",
            other.render(atoms),
            evidence(other, atoms, multi_row)
        ),
    }
}

/// Builds the refutation of the verdict's first counterexample.
pub fn explain(v: &Verdict, g: &GroundedProperty) -> Result<ExplanationTrace, EngineError> {
    if v.status != Status::Unsatisfied {
        return Err(EngineError::NothingToExplain(v.property.clone()));
    }
    let cx = v
        .counterexamples
        .first()
        .ok_or_else(|| EngineError::NothingToExplain(v.property.clone()))?;
    let top = g.top_level();
    let (rows, node) = top.get(cx.clause_index).ok_or_else(|| {
        EngineError::Mismatch(format!(
            "clause {} not in property {}",
            cx.clause_index, g.id
        ))
    })?;
    let ids: Vec<String> = rows.iter().map(|&r| g.row_ids[r].clone()).collect();
    let multi_row = ids.len() > 1;

    let global = node.atom_ids();
    let map: HashMap<usize, usize> = global.iter().enumerate().map(|(l, &a)| (a, l)).collect();
    let atoms: Vec<AtomClaim> = global
        .iter()
        .map(|&a| {
            let x = &g.atoms[a];
            AtomClaim {
                predicate: x.predicate.clone(),
                ids: x.ids.clone(),
                value: x.value,
                evidence: x.evidence.clone(),
            }
        })
        .collect();

    let clause_text = node.render(&g.atoms);
    let isolate = if matches!(g.root, Node::Forall(_)) {
        format!(
            "a universal claim fails iff one instance fails; isolate rows {}: {clause_text}",
            ids.join(",")
        )
    } else {
        format!("the property is a single clause: {clause_text}")
    };
    let conclusion = contradiction(node, &g.atoms, multi_row);
    let steps = vec![
        ExplanationStep {
            rule: StepRule::Negate,
            statement: format!("assume !({})", render_formula(&g.formula)),
        },
        ExplanationStep {
            rule: StepRule::Monotonicity,
            statement: isolate,
        },
        ExplanationStep {
            rule: StepRule::AtomEval,
            statement: atoms
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        },
        ExplanationStep {
            rule: StepRule::Transitivity,
            statement: format!("{conclusion}; contradiction"),
        },
    ];
    Ok(ExplanationTrace {
        property: g.id.clone(),
        formula: g.formula.clone(),
        rows: ids,
        steps,
        atoms,
        clause: remap(node, &map),
        conclusion,
    })
}

/// Re-reads every atom of the trace from the dataset and re-evaluates the isolated clause.
/// Ok(true) when every claimed value is reproduced and the clause is still false.
pub fn replay(t: &ExplanationTrace, d: &Dataset, b: &Bindings) -> Result<bool, EngineError> {
    let (domain, _) = usable_rows(d, b, &t.formula)?;
    let mut values = Vec::with_capacity(t.atoms.len());
    for a in &t.atoms {
        let binding = b
            .get(&a.predicate)
            .ok_or_else(|| EngineError::Mismatch(format!("no binding for `{}`", a.predicate)))?;
        let rows = a
            .ids
            .iter()
            .map(|id| {
                d.row_index(id)
                    .ok_or_else(|| EngineError::Mismatch(format!("row `{id}` not in dataset")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        values.push(binding.rule.eval(d, &rows, &domain));
    }
    let atoms_agree = t.atoms.iter().zip(&values).all(|(a, &v)| a.value == v);
    Ok(atoms_agree && !t.clause.eval_with(&|i| values[i]))
}
