//! Bounded search for a model where the premises hold and the conclusion fails.
//!
//! cargo run --example countermodel_search -- 'O(p)' 'p'

use std::sync::Arc;

use deontic_audit::formula::parse_formula;
use deontic_audit::semantics::{
    check_validity, render_model_file, ModelBounds, Signature, ValidityOutcome,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        args = vec!["O(p)".into(), "p".into()];
    }
    let conclusion = parse_formula(&args.pop().expect("non-empty"))?;
    let premises = args
        .iter()
        .map(|a| parse_formula(a))
        .collect::<Result<Vec<_>, _>>()?;

    let mut names: Vec<String> = Vec::new();
    for f in premises.iter().chain([&conclusion]) {
        for s in f.predicate_symbols() {
            if !names.contains(&s.name) {
                names.push(s.name.clone());
            }
        }
    }
    let sig = Arc::new(Signature::propositional(&names)?);
    let bounds = ModelBounds::up_to(sig, 2, false);
    match check_validity(&premises, &conclusion, &bounds)? {
        ValidityOutcome::ValidUpToBounds { models_checked } => {
            println!("valid on all {models_checked} models with at most 2 states");
        }
        ValidityOutcome::Counterexample(c) => {
            println!(
                "countermodel after {} models, fails at {}:",
                c.models_checked,
                c.model.state_name(c.state)
            );
            print!("{}", render_model_file(&c.model));
        }
    }
    Ok(())
}
