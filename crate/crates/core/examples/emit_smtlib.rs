//! Prints the SMT-LIB script for one COMPAS property. With AUDIT_SOLVER_CMD set (for
//! instance `z3 -in`), also runs it and prints the solver's verdict.
//!
//! cargo run --example emit_smtlib -- b

use std::path::PathBuf;

use deontic_audit::audit::run_emit;
use deontic_audit::dataset::{Mode, System};
use deontic_audit::engine::{run_solver, solver_from_env};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "b".into());
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let script = run_emit(
        &dir.join("compas_fixture.csv"),
        &dir.join("compas.toml"),
        System::Compas,
        &id,
        Mode::Reproduction,
        None,
    )?;
    print!("{script}");
    if let Some(cmd) = solver_from_env() {
        let answer = run_solver(&cmd, &script)?;
        println!("; solver verdict: {}", answer.verdict_status());
        for (sym, v) in &answer.model {
            println!(";   {sym} = {v}");
        }
    }
    Ok(())
}
