use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::dataset::{GroundedAtom, GroundedProperty, Node};

use super::{EngineError, Status};

fn plain(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// SMT symbol per grounded atom: `pred_r<id>[_r<id>]`, or a quoted `|pred(id,..)|` when an id
/// is not alphanumeric or the plain name collides.
pub fn atom_symbols(atoms: &[GroundedAtom]) -> Vec<String> {
    let mut used = HashSet::new();
    atoms
        .iter()
        .map(|a| {
            let simple = format!(
                "{}{}",
                a.predicate,
                a.ids.iter().map(|i| format!("_r{i}")).collect::<String>()
            );
            let name =
                if a.ids.iter().all(|i| plain(i)) && plain(&a.predicate) && !used.contains(&simple)
                {
                    simple
                } else {
                    let text: String = a
                        .to_string()
                        .chars()
                        .filter(|&c| c != '|' && c != '\\')
                        .collect();
                    format!("|{text}|")
                };
            used.insert(name.clone());
            name
        })
        .collect()
}

fn term(n: &Node, names: &[String]) -> String {
    let list = |op: &str, ns: &[Node], empty: &str| match ns.len() {
        0 => empty.to_string(),
        1 => term(&ns[0], names),
        _ => format!(
            "({op} {})",
            ns.iter()
                .map(|x| term(x, names))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    };
    match n {
        Node::Const(true) => "true".into(),
        Node::Const(false) => "false".into(),
        Node::Atom(i) => names[*i].clone(),
        Node::Not(a) => format!("(not {})", term(a, names)),
        Node::And(ns) => list("and", ns, "true"),
        Node::Or(ns) => list("or", ns, "false"),
        Node::Implies(a, b) => format!("(=> {} {})", term(a, names), term(b, names)),
        Node::Forall(q) => {
            let bodies: Vec<Node> = q.instances.iter().map(|i| i.body.clone()).collect();
            list("and", &bodies, "true")
        }
        Node::Exists(q) => {
            let bodies: Vec<Node> = q.instances.iter().map(|i| i.body.clone()).collect();
            list("or", &bodies, "false")
        }
    }
}

/// SMT-LIB 2 script that is `sat` exactly when the property is violated: the dataset's atom
/// values are conjoined as `dataset_facts` and asserted together with the negated property.
pub fn emit_smtlib(g: &GroundedProperty) -> String {
    let names = atom_symbols(&g.atoms);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "; property {}: {}",
        g.id,
        crate::formula::render_formula(&g.formula)
    );
    let _ = writeln!(out, "(set-logic QF_UF)");
    for n in &names {
        let _ = writeln!(out, "(declare-fun {n} () Bool)");
    }
    let facts: Vec<String> = g
        .atoms
        .iter()
        .zip(&names)
        .map(|(a, n)| {
            if a.value {
                n.clone()
            } else {
                format!("(not {n})")
            }
        })
        .collect();
    let facts = match facts.len() {
        0 => "true".to_string(),
        1 => facts[0].clone(),
        _ => format!("(and {})", facts.join(" ")),
    };
    let _ = writeln!(out, "(define-fun dataset_facts () Bool {facts})");
    let _ = writeln!(
        out,
        "(assert (and dataset_facts (not {})))",
        term(&g.root, &names)
    );
    let _ = writeln!(out, "(check-sat)");
    let _ = writeln!(out, "(get-model)");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverAnswer {
    pub status: SolverStatus,
    /// Boolean constants from the model (`sat` only), keyed by symbol with quotes removed.
    pub model: BTreeMap<String, bool>,
}

impl SolverAnswer {
    /// Verdict under the negated-assertion convention: `sat` means the property is violated.
    pub fn verdict_status(&self) -> Status {
        match self.status {
            SolverStatus::Sat => Status::Unsatisfied,
            SolverStatus::Unsat => Status::Satisfied,
        }
    }
}

fn tokens(text: &str) -> Result<Vec<String>, EngineError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' | ')' => {
                out.push(c.to_string());
                chars.next();
            }
            '|' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('|') => break,
                        Some(ch) => s.push(ch),
                        None => {
                            return Err(EngineError::SolverOutput("unterminated |symbol|".into()))
                        }
                    }
                }
                out.push(s);
            }
            '"' => {
                chars.next();
                let mut s = String::from("\"");
                for ch in chars.by_ref() {
                    s.push(ch);
                    if ch == '"' {
                        break;
                    }
                }
                out.push(s);
            }
            ';' => {
                for ch in chars.by_ref() {
                    if ch == '\n' {
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || ch == '(' || ch == ')' {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Reads a solver's stdout: the first token must be `sat` or `unsat`; a following
/// `(define-fun name () Bool value)` model is collected when present. Anything after `unsat`
/// (such as the error a solver prints for `(get-model)`) is ignored.
pub fn parse_solver_result(text: &str) -> Result<SolverAnswer, EngineError> {
    let first = text.split_whitespace().next().unwrap_or("");
    let status = match first {
        "sat" => SolverStatus::Sat,
        "unsat" => SolverStatus::Unsat,
        "unknown" => return Err(EngineError::SolverUnknown),
        other => {
            return Err(EngineError::SolverOutput(format!(
                "expected sat, unsat or unknown, found `{}`",
                other.chars().take(40).collect::<String>()
            )))
        }
    };
    let mut model = BTreeMap::new();
    if status == SolverStatus::Sat {
        let rest = text.trim_start().strip_prefix("sat").unwrap_or("");
        let toks = tokens(rest)?;
        let mut i = 0;
        while i < toks.len() {
            if toks[i] == "(" && toks.get(i + 1).map(String::as_str) == Some("define-fun") {
                // ( define-fun NAME ( ) Bool VALUE )
                if let (Some(name), Some("("), Some(")"), Some("Bool"), Some(v)) = (
                    toks.get(i + 2),
                    toks.get(i + 3).map(String::as_str),
                    toks.get(i + 4).map(String::as_str),
                    toks.get(i + 5).map(String::as_str),
                    toks.get(i + 6).map(String::as_str),
                ) {
                    match v {
                        "true" => {
                            model.insert(name.clone(), true);
                        }
                        "false" => {
                            model.insert(name.clone(), false);
                        }
                        _ => {}
                    }
                }
            }
            i += 1;
        }
    }
    Ok(SolverAnswer { status, model })
}
