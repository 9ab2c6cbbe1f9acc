//! Loads a model file and reports which states satisfy each formula.
//!
//! cargo run --example check_model -- data/example_model.txt '<>fair' 'O(fair)'

use std::path::PathBuf;

use deontic_audit::audit::run_check;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let model = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/example_model.txt")
    });
    let mut formulas: Vec<String> = args.collect();
    if formulas.is_empty() {
        formulas = vec![
            "<>fair".into(),
            "O(fair)".into(),
            "learns U fair".into(),
            "[]P(fair)".into(),
        ];
    }
    for f in &formulas {
        print!("{}", run_check(&model, f)?);
    }
    Ok(())
}
