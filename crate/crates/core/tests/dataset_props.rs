mod common;

use common::fixtures::{context, raw, soundness_failure, RawTable};
use deontic_audit::audit::{audit_context, parse_report_csv, AuditContext};
use deontic_audit::dataset::{
    default_bindings, ground_property, ground_property_with, similar, suite, Dataset,
    GroundOptions, Mode, PairIndex, System, ThresholdConfig,
};
use deontic_audit::engine::{check_grounded, Status};
use proptest::prelude::*;

fn system_strategy() -> impl Strategy<Value = System> {
    prop_oneof![Just(System::Compas), Just(System::Loan)]
}

fn check_sound(
    system: System,
    ctx: &AuditContext,
    t: &RawTable,
    keep: &[usize],
) -> Result<(), TestCaseError> {
    match soundness_failure(system, ctx, t, keep) {
        Some(msg) => Err(TestCaseError::fail(msg)),
        None => Ok(()),
    }
}

fn subset_strategy(n: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=max.min(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn grounding_is_sound_on_small_subsets(system in system_strategy(), seed in any::<u64>()) {
        let ctx = context(system);
        let t = raw(system);
        let keep = {
            use rand::{seq::index::sample, Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let k = rng.gen_range(1..=4);
            let mut v = sample(&mut rng, ctx.dataset.len(), k).into_vec();
            v.sort();
            v
        };
        check_sound(system, &ctx, &t, &keep)?;
    }

    #[test]
    fn removing_rows_never_breaks_a_property(system in system_strategy(), outer in subset_strategy(20, 20), mask in any::<u32>()) {
        let ctx = context(system);
        let outer: Vec<usize> = outer.into_iter().filter(|&i| i < ctx.dataset.len()).collect();
        prop_assume!(!outer.is_empty());
        let inner: Vec<usize> = outer.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
        prop_assume!(!inner.is_empty());
        let big = ctx.dataset.subset(&outer);
        let small = ctx.dataset.subset(&inner);
        for p in &ctx.properties {
            let before = ground_property(&p.id, &p.formula, &big, &ctx.bindings).unwrap().eval();
            let after = ground_property(&p.id, &p.formula, &small, &ctx.bindings).unwrap().eval();
            prop_assert!(!before || after, "{} holds on {:?} but not on {:?}", p.id, outer, inner);
        }
    }

    #[test]
    fn pair_index_gives_same_verdicts(system in system_strategy(), keep in subset_strategy(14, 14)) {
        let ctx = context(system);
        let d = ctx.dataset.subset(&keep);
        for p in &ctx.properties {
            let run = |pair_index| {
                let g = ground_property_with(&p.id, &p.formula, &d, &ctx.bindings, GroundOptions { pair_index, ..GroundOptions::default() }).unwrap();
                let v = check_grounded(&g);
                (v.status, v.counterexamples.iter().map(|c| c.rows.clone()).collect::<Vec<_>>())
            };
            prop_assert_eq!(run(PairIndex::Always), run(PairIndex::Never));
        }
    }

    #[test]
    fn similarity_is_symmetric_and_transitive(
        cells in prop::collection::vec((0u8..2, 0u8..2, 0u8..3), 3..8),
        (i, j, k) in (0usize..3, 0usize..3, 0usize..3),
    ) {
        let mut text = String::from("id,a,b,s\n");
        for (n, (a, b, s)) in cells.iter().enumerate() {
            text += &format!("r{n},{a},{b},{s}\n");
        }
        let d = Dataset::from_csv_str(&text, None, "id").unwrap();
        let cfg = ThresholdConfig {
            sensitive_columns: vec!["s".into()],
            nonsensitive_columns: vec!["a".into(), "b".into()],
            ..ThresholdConfig::default()
        };
        let (i, j, k) = (format!("r{i}"), format!("r{j}"), format!("r{k}"));
        prop_assume!(i != j && j != k && i != k);
        let sim = |x: &str, y: &str| similar(&d, x, y, &cfg).unwrap();
        prop_assert_eq!(sim(&i, &j), sim(&j, &i));
        if sim(&i, &j) && sim(&j, &k) {
            prop_assert!(sim(&i, &k));
        }
    }
}

#[test]
fn fixtures_are_sound_on_every_subset_up_to_three_rows() {
    for system in [System::Compas, System::Loan] {
        let ctx = context(system);
        let t = raw(system);
        let n = ctx.dataset.len();
        for a in 0..n {
            check_sound(system, &ctx, &t, &[a]).unwrap();
            for b in a + 1..n {
                check_sound(system, &ctx, &t, &[a, b]).unwrap();
                for c in b + 1..n {
                    check_sound(system, &ctx, &t, &[a, b, c]).unwrap();
                }
            }
        }
    }
}

#[test]
fn similar_rejects_same_and_unknown_rows() {
    let ctx = context(System::Loan);
    let cfg = &ctx.config.thresholds;
    assert!(similar(&ctx.dataset, "l01", "l01", cfg).is_err());
    assert!(similar(&ctx.dataset, "l01", "nope", cfg).is_err());
    assert!(similar(&ctx.dataset, "l05", "l06", cfg).unwrap());
    assert!(!similar(&ctx.dataset, "l01", "l02", cfg).unwrap());
}

#[test]
fn rows_with_nulls_are_skipped_with_a_warning() {
    let text = "id,race,gender,age,priors_count,decile_score,outcome,appeal\n\
                r1,Caucasian,Male,30,0,1,,0\n\
                r2,Caucasian,Male,30,2,7,1,1\n";
    let d = Dataset::from_csv_str(text, None, "id").unwrap();
    let cfg = ThresholdConfig {
        sensitive_columns: vec!["race".into(), "gender".into(), "age".into()],
        nonsensitive_columns: vec!["priors_count".into(), "decile_score".into()],
        ..ThresholdConfig::default()
    };
    let b = default_bindings(System::Compas, &cfg, d.schema()).unwrap();
    let props = suite(System::Compas);
    let b_prop = &props[1];
    let g = ground_property(&b_prop.id, &b_prop.formula, &d, &b).unwrap();
    assert_eq!(
        g.warnings,
        vec!["row r1 skipped: null in outcome".to_string()]
    );
    assert_eq!(g.domain.len(), 1);
    assert!(g.eval());
    // a property that never reads `outcome` keeps the row
    let a_prop = &props[0];
    let g = ground_property(&a_prop.id, &a_prop.formula, &d, &b).unwrap();
    assert!(g.skipped.is_empty());
}

#[test]
fn strict_mode_refuses_deontic_properties() {
    let ctx = context(System::Compas);
    for p in &ctx.properties {
        let r = ground_property_with(
            &p.id,
            &p.formula,
            &ctx.dataset,
            &ctx.bindings,
            GroundOptions {
                mode: Mode::Strict,
                ..GroundOptions::default()
            },
        );
        assert_eq!(r.is_err(), p.formula.has_deontic(), "{}", p.id);
    }
}

#[test]
fn report_csv_round_trips_verdicts() {
    for system in [System::Compas, System::Loan] {
        let ctx = context(system);
        let report = audit_context(&ctx, Mode::Reproduction, None).unwrap();
        let rows = parse_report_csv(&report.to_csv()).unwrap();
        let got: Vec<(String, Status, usize)> =
            rows.into_iter().map(|(id, s, n, _)| (id, s, n)).collect();
        let want: Vec<(String, Status, usize)> = report
            .entries
            .iter()
            .map(|e| {
                (
                    e.id.clone(),
                    e.verdict.status,
                    e.verdict.counterexamples.len(),
                )
            })
            .collect();
        assert_eq!(got, want);
    }
}
