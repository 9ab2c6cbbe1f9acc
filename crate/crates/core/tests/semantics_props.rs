mod common;

use std::sync::Arc;

use common::{
    formula_strategy, kripke_strategy, oracle, to_kripke, to_trace, trace_strategy, ATOMS,
};
use deontic_audit::formula::{parse_formula, Formula};
use deontic_audit::semantics::{
    check_validity, evaluate, evaluate_trace, find_model, parse_model_file, render_model_file,
    Assignment, CheckAt, ModelBounds, Signature, ValidityOutcome,
};
use proptest::prelude::*;

fn sigma() -> Assignment {
    Assignment::new()
}

fn small_bounds(trace_only: bool) -> ModelBounds {
    ModelBounds::up_to(
        Arc::new(Signature::propositional(&ATOMS).unwrap()),
        2,
        trace_only,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn trace_evaluator_matches_oracle(f in formula_strategy(4), m in trace_strategy(5)) {
        let t = to_trace(&m, &ATOMS);
        for k in 0..m.len() {
            prop_assert_eq!(evaluate_trace(&t, k, &sigma(), &f).unwrap(), oracle(&m, k, &f), "state {} of {:?}", k, m);
        }
    }

    #[test]
    fn kripke_evaluator_matches_oracle(f in formula_strategy(4), m in kripke_strategy(5)) {
        let k = to_kripke(&m, &ATOMS);
        for s in 0..m.len() {
            prop_assert_eq!(evaluate(&k, s, &sigma(), &f).unwrap(), oracle(&m, s, &f), "state {} of {:?}", s, m);
        }
    }

    #[test]
    fn trace_and_kripke_agree_on_chains(f in formula_strategy(4), m in trace_strategy(5)) {
        let t = to_trace(&m, &ATOMS);
        let k = t.to_kripke().unwrap();
        prop_assert!(k.is_chain());
        for s in 0..m.len() {
            prop_assert_eq!(evaluate_trace(&t, s, &sigma(), &f).unwrap(), evaluate(&k, s, &sigma(), &f).unwrap());
        }
    }

    #[test]
    fn deontic_and_temporal_duals(f in formula_strategy(3), m in kripke_strategy(4)) {
        let k = to_kripke(&m, &ATOMS);
        let nf = Formula::not(f.clone());
        let pairs = [
            (Formula::oblig(f.clone()), Formula::not(Formula::perm(nf.clone()))),
            (Formula::perm(f.clone()), Formula::not(Formula::oblig(nf.clone()))),
            (Formula::forb(f.clone()), Formula::oblig(nf.clone())),
            (Formula::forb(f.clone()), Formula::not(Formula::perm(f.clone()))),
            (Formula::always(f.clone()), Formula::not(Formula::eventually(nf))),
        ];
        for (a, b) in &pairs {
            for s in 0..m.len() {
                prop_assert_eq!(evaluate(&k, s, &sigma(), a).unwrap(), evaluate(&k, s, &sigma(), b).unwrap(), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn until_unfolds_one_step(a in formula_strategy(3), b in formula_strategy(3), m in trace_strategy(5)) {
        let t = to_trace(&m, &ATOMS);
        let u = Formula::until(a.clone(), b.clone());
        let n = m.len();
        let at = |f: &Formula, k: usize| evaluate_trace(&t, k, &sigma(), f).unwrap();
        for k in 0..n {
            let next = k + 1 < n && at(&u, k + 1);
            prop_assert_eq!(at(&u, k), at(&b, k) || (at(&a, k) && next));
        }
        // eventually is until with a trivially true left side
        let top = Formula::or(Formula::prop("p"), Formula::not(Formula::prop("p")));
        for k in 0..n {
            prop_assert_eq!(at(&Formula::eventually(b.clone()), k), at(&Formula::until(top.clone(), b.clone()), k));
        }
    }

    #[test]
    fn model_file_round_trip(m in kripke_strategy(4)) {
        let k = to_kripke(&m, &ATOMS);
        let back = parse_model_file(&render_model_file(&k), &[]).unwrap();
        for f in ["p", "q", "<>p", "O(q)", "p U q", "P([]p)"] {
            let f = parse_formula(f).unwrap();
            for s in 0..m.len() {
                let sb = back.state_index(k.state_name(s)).unwrap();
                prop_assert_eq!(evaluate(&k, s, &sigma(), &f).unwrap(), evaluate(&back, sb, &sigma(), &f).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extra_premises_never_break_validity(
        ps in prop::collection::vec(formula_strategy(2), 0..3),
        extra in formula_strategy(2),
        c in formula_strategy(2),
        trace_only in any::<bool>(),
    ) {
        let bounds = small_bounds(trace_only);
        let base = check_validity(&ps, &c, &bounds).unwrap();
        let mut more = ps.clone();
        more.push(extra);
        let stronger = check_validity(&more, &c, &bounds).unwrap();
        if base.is_valid() {
            prop_assert!(stronger.is_valid());
        }
        if let ValidityOutcome::Counterexample(cx) = &stronger {
            // a countermodel for more premises refutes fewer premises too
            for p in &ps {
                prop_assert!(evaluate(&cx.model, cx.state, &cx.assignment, p).unwrap());
            }
            prop_assert!(!evaluate(&cx.model, cx.state, &cx.assignment, &c).unwrap());
            prop_assert!(!base.is_valid());
        }
    }

    #[test]
    fn find_model_agrees_with_validity_of_negation(f in formula_strategy(3)) {
        let bounds = small_bounds(false);
        let (found, _) = find_model(&f, &bounds, CheckAt::EveryState).unwrap();
        let refuted = !check_validity(&[], &Formula::not(f.clone()), &bounds).unwrap().is_valid();
        prop_assert_eq!(found.is_some(), refuted);
        if let Some((m, s, a)) = found {
            prop_assert!(evaluate(&m, s, &a, &f).unwrap());
        }
    }
}

#[test]
fn enumeration_counts_match_closed_form() {
    // sum over n of 2^(n*n) relations, times 2^(n*n) more when not a chain, times 2^(n*atoms)
    let sig = Arc::new(Signature::propositional(&ATOMS).unwrap());
    let traces: u64 = (1..=3u32).map(|n| (1u64 << (n * n)) << (n * 2)).sum();
    let kripke: u64 = (1..=2u32).map(|n| (1u64 << (2 * n * n)) << (n * 2)).sum();
    assert_eq!(
        ModelBounds::up_to(sig.clone(), 3, true)
            .model_count()
            .unwrap(),
        traces
    );
    assert_eq!(
        ModelBounds::up_to(sig.clone(), 2, false)
            .model_count()
            .unwrap(),
        kripke
    );
    let f = parse_formula("p | !p").unwrap();
    let visited = check_validity(&[], &f, &ModelBounds::up_to(sig, 3, true)).unwrap();
    assert_eq!(visited.models_checked(), traces);
}
