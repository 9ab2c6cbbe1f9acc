mod common;

use common::{formula_strategy, oracle, trace_strategy, PlainModel};
use deontic_audit::formula::{
    free_variables, normalize_duals, parse_formula, render_formula, substitute, Formula,
};
use proptest::prelude::*;

fn quantified_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::pred("r", &["x"])),
        Just(Formula::pred("s", &["x", "y"])),
        Just(Formula::prop("p")),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.clone().prop_map(Formula::oblig),
            inner.clone().prop_map(Formula::eventually),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
            inner.clone().prop_map(|f| Formula::forall("x", f)),
            inner.prop_map(|f| Formula::exists("y", f)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn render_then_parse_is_identity(f in formula_strategy(4)) {
        let text = render_formula(&f);
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn render_then_parse_with_binders(f in quantified_strategy()) {
        let text = render_formula(&f);
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn dual_normal_form_is_idempotent(f in formula_strategy(4)) {
        let once = normalize_duals(&f);
        prop_assert_eq!(normalize_duals(&once), once);
    }

    #[test]
    fn dual_normal_form_uses_only_obligation(f in formula_strategy(4)) {
        let text = render_formula(&normalize_duals(&f));
        prop_assert!(!text.contains("P(") && !text.contains("Forb("), "{}", text);
    }

    #[test]
    fn dual_normal_form_preserves_truth(f in formula_strategy(3), m in trace_strategy(4)) {
        let g = normalize_duals(&f);
        for s in 0..m.len() {
            prop_assert_eq!(oracle(&m, s, &f), oracle(&m, s, &g));
        }
    }

    #[test]
    fn substitution_closes_and_commutes(f in quantified_strategy(), c in prop::sample::select(vec!["a", "b"])) {
        let mut g = f.clone();
        for v in free_variables(&f) {
            g = substitute(&g, &v, c);
        }
        prop_assert!(free_variables(&g).is_empty());
        // substituting a variable that is not free changes nothing
        prop_assert_eq!(substitute(&g, "x", "z"), g.clone());
        prop_assert_eq!(g.size(), f.size());
    }

    #[test]
    fn forall_is_conjunction_of_instances(f in quantified_strategy()) {
        // close over y first so only x is left
        let body = substitute(&f, "y", "a");
        let m = PlainModel {
            temporal: vec![[1].into(), Default::default()],
            deontic: vec![[0, 1].into(), [1].into()],
            truth: vec![
                ["r(a)", "s(a,a)", "p"].iter().map(|s| s.to_string()).collect(),
                ["r(b)", "s(b,a)"].iter().map(|s| s.to_string()).collect(),
            ],
            domain: vec!["a".into(), "b".into()],
        };
        let quantified = Formula::forall("x", body.clone());
        let expanded = Formula::and(substitute(&body, "x", "a"), substitute(&body, "x", "b"));
        for s in 0..2 {
            prop_assert_eq!(oracle(&m, s, &quantified), oracle(&m, s, &expanded));
        }
    }
}

#[test]
fn iff_and_multi_binders_desugar() {
    assert_eq!(
        parse_formula("a <-> b").unwrap(),
        parse_formula("(a -> b) & (b -> a)").unwrap()
    );
    assert_eq!(
        parse_formula("forall i,j. s(i,j)").unwrap(),
        parse_formula("forall i. forall j. s(i,j)").unwrap()
    );
}
