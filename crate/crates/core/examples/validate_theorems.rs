//! Checks every theorem over bounded traces and prints the report lines.
//!
//! cargo run --release --example validate_theorems -- [max_states] [max_atoms]

use deontic_audit::norms::{render_theorem_report, validate_all, TheoremBounds};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mut bounds = TheoremBounds::default();
    if let Some(s) = args.next() {
        bounds.max_states = s.parse()?;
    }
    if let Some(a) = args.next() {
        bounds.max_atoms = a.parse()?;
    }
    let reports = validate_all(bounds)?;
    print!("{}", render_theorem_report(&reports));
    Ok(())
}
