mod common;

use common::golden;
use deontic_audit::audit::run_theorems;
use deontic_audit::norms::{
    theorem_specs, validate_spec, ExpectedStatus, TheoremBounds, TheoremStatus,
};
use deontic_audit::semantics::evaluate;

#[test]
fn report_matches_golden() {
    let (_, text) = run_theorems(TheoremBounds::default(), None).unwrap();
    assert_eq!(
        text,
        std::fs::read_to_string(golden("theorems.report")).unwrap()
    );
}

#[test]
fn expected_statuses_hold_and_countermodels_are_genuine() {
    for spec in theorem_specs() {
        let r = validate_spec(&spec, TheoremBounds::default()).unwrap();
        if spec.expected_status == ExpectedStatus::ValidUpToBounds {
            assert!(
                matches!(r.status, TheoremStatus::ValidUpToBounds),
                "{}",
                spec.id
            );
        }
        if let TheoremStatus::Counterexample(cx) = &r.status {
            for p in &spec.premises {
                assert!(
                    evaluate(&cx.model, cx.state, &cx.assignment, &p.asserted()).unwrap(),
                    "{}",
                    spec.id
                );
            }
            assert!(
                !evaluate(&cx.model, cx.state, &cx.assignment, &spec.conclusion).unwrap(),
                "{}",
                spec.id
            );
        }
    }
}

#[test]
fn tight_atom_bound_skips_instead_of_guessing() {
    let (reports, _) = run_theorems(
        TheoremBounds {
            max_states: 2,
            max_atoms: 3,
        },
        None,
    )
    .unwrap();
    let skipped: Vec<&str> = reports
        .iter()
        .filter(|r| matches!(r.status, TheoremStatus::Skipped { .. }))
        .map(|r| r.id)
        .collect();
    assert_eq!(skipped, ["T5", "T6", "T7"]);
}
