//! Suite properties recomputed from raw CSV cells, without the grounding pipeline.

use std::collections::HashMap;

use deontic_audit::dataset::System;

pub struct RawTable {
    pub rows: Vec<HashMap<String, String>>,
}

impl RawTable {
    pub fn load(path: &std::path::Path) -> RawTable {
        let mut r = csv::Reader::from_path(path).unwrap();
        let header = r.headers().unwrap().clone();
        let rows = r
            .records()
            .map(|rec| {
                let rec = rec.unwrap();
                header
                    .iter()
                    .zip(rec.iter())
                    .map(|(h, v)| (h.to_string(), v.to_string()))
                    .collect()
            })
            .collect();
        RawTable { rows }
    }

    fn num(&self, r: usize, c: &str) -> f64 {
        self.rows[r][c].parse().unwrap()
    }

    fn same(&self, i: usize, j: usize, cols: &[&str]) -> bool {
        cols.iter().all(|c| self.rows[i][*c] == self.rows[j][*c])
    }
}

/// Verdict of property `id` on the rows `keep` (positions into `t`), reproduction mode.
pub fn expected(system: System, id: &str, t: &RawTable, keep: &[usize]) -> bool {
    let all1 = |p: &dyn Fn(usize) -> bool| keep.iter().all(|&i| p(i));
    let all2 =
        |p: &dyn Fn(usize, usize) -> bool| keep.iter().all(|&i| keep.iter().all(|&j| p(i, j)));
    match system {
        System::Compas => {
            let priors = |i| t.num(i, "priors_count") > 0.0;
            let recid = |i| t.num(i, "outcome") == 1.0;
            let assess = |i| t.num(i, "decile_score") >= 5.0;
            let flip = |i, j| {
                t.same(i, j, &["priors_count", "decile_score"])
                    && !t.same(i, j, &["race", "gender", "age"])
            };
            match id {
                "a" => all1(&|i| !priors(i) || assess(i)),
                "b" => all1(&|i| !recid(i) || assess(i)),
                "c" => all2(&|i, j| !flip(i, j) || recid(i) == recid(j)),
                "d" => all1(&|i| priors(i) || !recid(i)),
                "e" => all1(&|i| !recid(i) || t.num(i, "appeal") == 1.0),
                _ => panic!("no property {id}"),
            }
        }
        System::Loan => {
            let approved = |i| t.num(i, "approved") == 1.0;
            let nonsensitive = ["age", "occupation", "income", "credit_score"];
            match id {
                "a" => true,
                "b" => all1(&|i| {
                    !(t.num(i, "credit_score") >= 650.0 || t.num(i, "income") >= 50000.0)
                        || approved(i)
                }),
                "c" => all2(&|i, j| !t.same(i, j, &nonsensitive) || approved(i) == approved(j)),
                "d" => all2(&|i, j| {
                    !(t.same(i, j, &nonsensitive) && !t.same(i, j, &["gender"]))
                        || approved(i) == approved(j)
                }),
                "e" => all1(&|i| approved(i) || t.num(i, "appeal") == 1.0),
                _ => panic!("no property {id}"),
            }
        }
    }
}

pub fn context(system: System) -> deontic_audit::audit::AuditContext {
    let (csv, toml) = match system {
        System::Compas => ("compas_fixture.csv", "compas.toml"),
        System::Loan => ("loan_fixture.csv", "loan.toml"),
    };
    deontic_audit::audit::AuditContext::load(&super::data(csv), &super::data(toml), system, None)
        .unwrap()
}

pub fn raw(system: System) -> RawTable {
    RawTable::load(&super::data(match system {
        System::Compas => "compas_fixture.csv",
        System::Loan => "loan_fixture.csv",
    }))
}

/// Compares the grounded verdict, the induced model, and the raw cells on rows `keep`.
/// Returns a description of the first disagreement.
pub fn soundness_failure(
    system: System,
    ctx: &deontic_audit::audit::AuditContext,
    t: &RawTable,
    keep: &[usize],
) -> Option<String> {
    use deontic_audit::dataset::{ground_property, induced_model};
    use deontic_audit::engine::{check_grounded, Status};
    use deontic_audit::semantics::{evaluate, Assignment};

    let d = ctx.dataset.subset(keep);
    for p in &ctx.properties {
        let g = ground_property(&p.id, &p.formula, &d, &ctx.bindings).unwrap();
        let m = induced_model(&d, &ctx.bindings, &p.formula).unwrap();
        let semantic = evaluate(&m, 0, &Assignment::new(), &p.formula).unwrap();
        let raw = expected(system, &p.id, t, keep);
        let verdict = check_grounded(&g).status == Status::Satisfied;
        if g.eval() != semantic || g.eval() != raw || verdict != raw {
            return Some(format!(
                "{system} {} on rows {keep:?}: grounded {} induced {semantic} raw {raw} verdict {verdict}",
                p.id,
                g.eval()
            ));
        }
    }
    None
}
