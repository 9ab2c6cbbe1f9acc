//! Plain-text model files.
//!
//! ```text
//! # two states, p holds at s1 only
//! states: s0 s1
//! domain: a b          # optional; constants used in I lines are added automatically
//! pred: q/1            # optional; predicates used in I lines are added automatically
//! RT: s0 s1            # temporal edge s0 -> s1
//! RO: s0 s0            # deontic edge
//! I: s1 p=true
//! I: s0 q(a)=false
//! ```
//!
//! Atoms not mentioned are false. `states:` must come before any line naming a state.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{KripkeModel, SemanticsError, Signature};
use crate::formula::PredicateSymbol;

fn err(line: usize, message: impl Into<String>) -> SemanticsError {
    SemanticsError::ModelFile {
        line,
        message: message.into(),
    }
}

struct Valuation {
    line: usize,
    state: usize,
    predicate: String,
    args: Vec<String>,
    value: bool,
}

fn parse_atom(text: &str, line: usize) -> Result<(String, Vec<String>), SemanticsError> {
    let text = text.trim();
    let (name, args) = match text.find('(') {
        Some(open) => {
            let inner = text[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| err(line, format!("unclosed argument list in `{text}`")))?;
            let args: Vec<String> = inner.split(',').map(|a| a.trim().to_string()).collect();
            if args.iter().any(String::is_empty) {
                return Err(err(line, format!("empty argument in `{text}`")));
            }
            (text[..open].trim(), args)
        }
        None => (text, Vec::new()),
    };
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(err(line, format!("bad predicate name `{name}`")));
    }
    Ok((name.to_string(), args))
}

/// Parses a model file. `extra` predicates (e.g. those of a formula to be checked) are added to
/// the vocabulary when the file does not mention them.
pub fn parse_model_file(
    text: &str,
    extra: &[PredicateSymbol],
) -> Result<KripkeModel, SemanticsError> {
    let mut states: Option<Vec<String>> = None;
    let mut domain: Vec<String> = Vec::new();
    let mut preds: Vec<PredicateSymbol> = Vec::new();
    let mut rt = Vec::new();
    let mut ro = Vec::new();
    let mut vals = Vec::new();

    let declare =
        |preds: &mut Vec<PredicateSymbol>, name: &str, arity: usize, line: usize| match preds
            .iter()
            .find(|p| p.name == name)
        {
            Some(p) if p.arity != arity => Err(err(
                line,
                format!(
                    "predicate `{name}` used with arity {arity}, declared {}",
                    p.arity
                ),
            )),
            Some(_) => Ok(()),
            None => {
                preds.push(PredicateSymbol::new(name, arity));
                Ok(())
            }
        };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = crate::formula::strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content
            .split_once(':')
            .ok_or_else(|| err(line, "expected `key: value`"))?;
        let rest = rest.trim();
        let state_of = |name: &str| -> Result<usize, SemanticsError> {
            let names = states
                .as_ref()
                .ok_or_else(|| err(line, "`states:` must come first"))?;
            names
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| err(line, format!("unknown state `{name}`")))
        };
        match key.trim() {
            "states" => {
                if states.is_some() {
                    return Err(err(line, "duplicate `states:` line"));
                }
                let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
                let unique: BTreeSet<&String> = names.iter().collect();
                if unique.len() != names.len() {
                    return Err(err(line, "duplicate state name"));
                }
                states = Some(names);
            }
            "domain" => {
                for c in rest.split_whitespace() {
                    if !domain.iter().any(|d| d == c) {
                        domain.push(c.to_string());
                    }
                }
            }
            "pred" => {
                for decl in rest.split_whitespace() {
                    let (name, arity) = decl.split_once('/').ok_or_else(|| {
                        err(line, format!("expected `name/arity`, found `{decl}`"))
                    })?;
                    let arity: usize = arity
                        .parse()
                        .map_err(|_| err(line, format!("bad arity in `{decl}`")))?;
                    declare(&mut preds, name, arity, line)?;
                }
            }
            k @ ("RT" | "RO") => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [from, to] = parts[..] else {
                    return Err(err(line, format!("`{k}:` takes exactly two states")));
                };
                let edge = (state_of(from)?, state_of(to)?);
                if k == "RT" {
                    rt.push(edge);
                } else {
                    ro.push(edge);
                }
            }
            "I" => {
                let (state, assign) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| err(line, "expected `I: <state> <atom>=<true|false>`"))?;
                let state = state_of(state)?;
                let (atom, value) = assign
                    .rsplit_once('=')
                    .ok_or_else(|| err(line, "expected `<atom>=<true|false>`"))?;
                let value = match value.trim() {
                    "true" => true,
                    "false" => false,
                    v => return Err(err(line, format!("expected true or false, found `{v}`"))),
                };
                let (predicate, args) = parse_atom(atom, line)?;
                declare(&mut preds, &predicate, args.len(), line)?;
                for a in &args {
                    if !domain.contains(a) {
                        domain.push(a.clone());
                    }
                }
                vals.push(Valuation {
                    line,
                    state,
                    predicate,
                    args,
                    value,
                });
            }
            other => return Err(err(line, format!("unknown key `{other}`"))),
        }
    }

    for p in extra {
        if !preds.iter().any(|q| q.name == p.name) {
            preds.push(p.clone());
        }
    }
    let names = states.ok_or_else(|| err(0, "missing `states:` line"))?;
    let sig = Arc::new(Signature::new(preds, domain)?);
    let mut m = KripkeModel::with_names(sig, names)?;
    for (a, b) in rt {
        m.add_temporal_edge(a, b)?;
    }
    for (a, b) in ro {
        m.add_deontic_edge(a, b)?;
    }
    for v in vals {
        let args: Vec<&str> = v.args.iter().map(String::as_str).collect();
        m.set(&v.predicate, &args, v.state, v.value)
            .map_err(|e| err(v.line, e.to_string()))?;
    }
    Ok(m)
}

/// Writes `m` in the model-file format, listing only true atoms.
pub fn render_model_file(m: &KripkeModel) -> String {
    let sig = m.signature();
    let mut out = String::new();
    let names: Vec<&str> = (0..m.num_states()).map(|s| m.state_name(s)).collect();
    let _ = writeln!(out, "states: {}", names.join(" "));
    if !sig.domain().is_empty() {
        let _ = writeln!(out, "domain: {}", sig.domain().join(" "));
    }
    if !sig.predicates().is_empty() {
        let decls: Vec<String> = sig
            .predicates()
            .iter()
            .map(|p| format!("{}/{}", p.name, p.arity))
            .collect();
        let _ = writeln!(out, "pred: {}", decls.join(" "));
    }
    for s in 0..m.num_states() {
        for t in m.temporal_successors(s) {
            let _ = writeln!(out, "RT: {} {}", names[s], names[t]);
        }
    }
    for s in 0..m.num_states() {
        for t in m.deontic_successors(s) {
            let _ = writeln!(out, "RO: {} {}", names[s], names[t]);
        }
    }
    for (s, name) in names.iter().enumerate() {
        for id in 0..sig.atom_count() {
            if m.holds(s, id) {
                let g = sig.ground_atom(id);
                let atom = if g.args.is_empty() {
                    g.predicate
                } else {
                    format!("{}({})", g.predicate, g.args.join(","))
                };
                let _ = writeln!(out, "I: {name} {atom}=true");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::semantics::{evaluate, Assignment};

    const SAMPLE: &str = "\
# comment line
states: s0 s1 s2
RT: s0 s1
RT: s1 s2
RO: s0 s2   # ideal world
I: s0 p=true
I: s1 p=true
I: s2 q(a)=true
";

    #[test]
    fn parses_and_evaluates() {
        let m = parse_model_file(SAMPLE, &[]).unwrap();
        assert_eq!(m.num_states(), 3);
        let sigma = Assignment::new();
        let until = parse_formula("p U q(\"a\")").unwrap();
        assert!(evaluate(&m, 0, &sigma, &until).unwrap());
        assert!(evaluate(&m, 0, &sigma, &parse_formula("O(q(\"a\"))").unwrap()).unwrap());
        assert!(!evaluate(&m, 1, &sigma, &parse_formula("P(p)").unwrap()).unwrap());
    }

    #[test]
    fn render_round_trips() {
        let m = parse_model_file(SAMPLE, &[]).unwrap();
        let again = parse_model_file(&render_model_file(&m), &[]).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn extra_predicates_default_to_false() {
        let m = parse_model_file(SAMPLE, &[PredicateSymbol::new("r", 0)]).unwrap();
        let r = parse_formula("<>r").unwrap();
        assert!(!evaluate(&m, 0, &Assignment::new(), &r).unwrap());
    }

    #[test]
    fn errors_carry_lines() {
        let bad = "states: s0\nRT: s0 s9\n";
        assert!(matches!(
            parse_model_file(bad, &[]),
            Err(SemanticsError::ModelFile { line: 2, .. })
        ));
        assert!(matches!(
            parse_model_file("RT: s0 s0\n", &[]),
            Err(SemanticsError::ModelFile { line: 1, .. })
        ));
        assert!(matches!(
            parse_model_file("states: s0\nI: s0 p=maybe\n", &[]),
            Err(SemanticsError::ModelFile { line: 2, .. })
        ));
        assert!(parse_model_file("states: s0\nI: s0 p=true\nI: s0 p(a)=true\n", &[]).is_err());
    }
}
