//! Parses formulas, prints their canonical rendering, and shows the dual normal form.
//!
//! cargo run --example parse_and_render -- 'forall i. Forb(bias(i)) -> <>fair(i)'

use deontic_audit::formula::{normalize_duals, parse_formula, render_formula};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inputs: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if inputs.is_empty() {
        vec![
            "O(fair) -> P(fair)".to_string(),
            "forall i,j. cf(i, j) -> (ethical(i) <-> ethical(j))".to_string(),
            "[]!bias U <>ethical".to_string(),
        ]
    } else {
        inputs
    };
    for text in &inputs {
        let f = parse_formula(text)?;
        println!("input:      {text}");
        println!("rendered:   {}", render_formula(&f));
        println!("duals:      {}", normalize_duals(&f));
        println!("size/depth: {}/{}", f.size(), f.depth());
        println!();
    }
    Ok(())
}
