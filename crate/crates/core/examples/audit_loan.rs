//! Audits the loan fixture, then the same data with the discriminated applicant removed.

use std::path::PathBuf;

use deontic_audit::audit::{run_audit, AuditRequest};
use deontic_audit::dataset::{Mode, System};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    for file in ["loan_fixture.csv", "loan_clean.csv"] {
        let report = run_audit(&AuditRequest {
            data: dir.join(file),
            config: dir.join("loan.toml"),
            system: System::Loan,
            mode: Mode::Reproduction,
            properties: None,
            solver: None,
        })?;
        println!("== {file}");
        for (id, status) in report.statuses() {
            println!("{id}: {status}");
        }
        println!("ethical: {}", report.ethical());
    }
    Ok(())
}
