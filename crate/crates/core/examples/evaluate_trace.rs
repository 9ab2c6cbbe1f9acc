//! Evaluates a few temporal and deontic formulas on a hand-built three-state trace.

use std::sync::Arc;

use deontic_audit::formula::parse_formula;
use deontic_audit::semantics::{evaluate_trace, Assignment, Signature, TraceModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sig = Arc::new(Signature::propositional(&["learns", "fair", "bias"])?);
    let mut t = TraceModel::new(sig, 3)?;
    for k in 0..3 {
        t.set("learns", &[], k, true)?;
    }
    t.set("bias", &[], 0, true)?;
    t.set("fair", &[], 2, true)?;
    // every state sees the last one as its ideal alternative
    for k in 0..3 {
        t.set_deontic_successors(k, vec![2])?;
    }

    let sigma = Assignment::new();
    for text in [
        "<>fair",
        "[]learns",
        "bias U fair",
        "O(fair)",
        "P(bias)",
        "[]O(!bias)",
    ] {
        let f = parse_formula(text)?;
        let row: Vec<String> = (0..t.len())
            .map(|k| {
                evaluate_trace(&t, k, &sigma, &f).map(|b| if b { "T" } else { "." }.to_string())
            })
            .collect::<Result<_, _>>()?;
        println!("{text:<12} {}", row.join(" "));
    }
    Ok(())
}
