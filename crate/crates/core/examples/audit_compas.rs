//! Runs the COMPAS suite on the bundled fixture and prints the report.

use std::path::PathBuf;

use deontic_audit::audit::{run_audit, AuditRequest, DEFAULT_CAP};
use deontic_audit::dataset::{Mode, System};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let report = run_audit(&AuditRequest {
        data: data.join("compas_fixture.csv"),
        config: data.join("compas.toml"),
        system: System::Compas,
        mode: Mode::Reproduction,
        properties: None,
        solver: None,
    })?;
    print!("{}", report.to_text(Some(DEFAULT_CAP)));
    Ok(())
}
