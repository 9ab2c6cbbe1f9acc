use std::collections::BTreeSet;

use super::ast::{Atom, Formula, Term};

/// Variables with at least one free occurrence.
pub fn free_variables(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut bound = Vec::new();
    collect_free(f, &mut bound, &mut out);
    out
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(a) => {
            for t in &a.args {
                if let Term::Var(v) = t {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
        }
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            bound.push(v.clone());
            collect_free(g, bound, out);
            bound.pop();
        }
        _ => {
            for c in f.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

/// Replaces every free occurrence of `var` with the constant `constant`.
pub fn substitute(f: &Formula, var: &str, constant: &str) -> Formula {
    let rec = |g: &Formula| Box::new(substitute(g, var, constant));
    match f {
        Formula::Atom(a) => Formula::Atom(Atom {
            predicate: a.predicate.clone(),
            args: a
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) if v == var => Term::Const(constant.to_string()),
                    other => other.clone(),
                })
                .collect(),
        }),
        Formula::Forall(v, _) | Formula::Exists(v, _) if v == var => f.clone(),
        Formula::Forall(v, g) => Formula::Forall(v.clone(), rec(g)),
        Formula::Exists(v, g) => Formula::Exists(v.clone(), rec(g)),
        Formula::Not(g) => Formula::Not(rec(g)),
        Formula::Oblig(g) => Formula::Oblig(rec(g)),
        Formula::Perm(g) => Formula::Perm(rec(g)),
        Formula::Forb(g) => Formula::Forb(rec(g)),
        Formula::Always(g) => Formula::Always(rec(g)),
        Formula::Eventually(g) => Formula::Eventually(rec(g)),
        Formula::And(a, b) => Formula::And(rec(a), rec(b)),
        Formula::Or(a, b) => Formula::Or(rec(a), rec(b)),
        Formula::Implies(a, b) => Formula::Implies(rec(a), rec(b)),
        Formula::Until(a, b) => Formula::Until(rec(a), rec(b)),
    }
}

/// Rewrites permission and prohibition through obligation:
/// `P(f)` becomes `!O(!f)` and `Forb(f)` becomes `O(!f)`.
pub fn normalize_duals(f: &Formula) -> Formula {
    let rec = |g: &Formula| Box::new(normalize_duals(g));
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Perm(g) => Formula::not(Formula::oblig(Formula::Not(rec(g)))),
        Formula::Forb(g) => Formula::oblig(Formula::Not(rec(g))),
        Formula::Oblig(g) => Formula::Oblig(rec(g)),
        Formula::Not(g) => Formula::Not(rec(g)),
        Formula::Always(g) => Formula::Always(rec(g)),
        Formula::Eventually(g) => Formula::Eventually(rec(g)),
        Formula::Forall(v, g) => Formula::Forall(v.clone(), rec(g)),
        Formula::Exists(v, g) => Formula::Exists(v.clone(), rec(g)),
        Formula::And(a, b) => Formula::And(rec(a), rec(b)),
        Formula::Or(a, b) => Formula::Or(rec(a), rec(b)),
        Formula::Implies(a, b) => Formula::Implies(rec(a), rec(b)),
        Formula::Until(a, b) => Formula::Until(rec(a), rec(b)),
    }
}
