//! Shared test support: an independent recursive evaluator, random generators, fixture paths.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use deontic_audit::formula::{substitute, Formula};
use deontic_audit::semantics::{KripkeModel, Signature, TraceModel};
use proptest::prelude::*;
use rand::Rng;

pub fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(file)
}

pub fn golden(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(file)
}

/// A finite model kept as plain sets so the oracle shares no code with the library.
#[derive(Debug, Clone)]
pub struct PlainModel {
    pub temporal: Vec<BTreeSet<usize>>,
    pub deontic: Vec<BTreeSet<usize>>,
    /// Ground atoms true at each state, as `p` or `p(a,b)`.
    pub truth: Vec<BTreeSet<String>>,
    pub domain: Vec<String>,
}

impl PlainModel {
    pub fn len(&self) -> usize {
        self.truth.len()
    }

    /// States reachable in zero or more temporal steps.
    fn reach(&self, s: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &self.temporal[u] {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// A linear trace with the given deontic sets.
    pub fn trace(truth: Vec<BTreeSet<String>>, deontic: Vec<BTreeSet<usize>>) -> Self {
        let n = truth.len();
        let temporal = (0..n)
            .map(|k| {
                if k + 1 < n {
                    BTreeSet::from([k + 1])
                } else {
                    BTreeSet::new()
                }
            })
            .collect();
        PlainModel {
            temporal,
            deontic,
            truth,
            domain: Vec::new(),
        }
    }
}

fn ground_key(f: &deontic_audit::formula::Atom) -> String {
    if f.args.is_empty() {
        return f.predicate.clone();
    }
    let args: Vec<String> = f
        .args
        .iter()
        .map(|t| match t {
            deontic_audit::formula::Term::Const(c) => c.clone(),
            deontic_audit::formula::Term::Var(v) => panic!("oracle met free variable {v}"),
        })
        .collect();
    format!("{}({})", f.predicate, args.join(","))
}

/// Truth of a closed formula at state `s`, straight from the textbook clauses.
pub fn oracle(m: &PlainModel, s: usize, f: &Formula) -> bool {
    match f {
        Formula::Atom(a) => m.truth[s].contains(&ground_key(a)),
        Formula::Not(a) => !oracle(m, s, a),
        Formula::And(a, b) => oracle(m, s, a) && oracle(m, s, b),
        Formula::Or(a, b) => oracle(m, s, a) || oracle(m, s, b),
        Formula::Implies(a, b) => !oracle(m, s, a) || oracle(m, s, b),
        Formula::Oblig(a) => m.deontic[s].iter().all(|&t| oracle(m, t, a)),
        Formula::Perm(a) => m.deontic[s].iter().any(|&t| oracle(m, t, a)),
        Formula::Forb(a) => m.deontic[s].iter().all(|&t| !oracle(m, t, a)),
        Formula::Always(a) => m.reach(s).into_iter().all(|t| oracle(m, t, a)),
        Formula::Eventually(a) => m.reach(s).into_iter().any(|t| oracle(m, t, a)),
        Formula::Until(a, b) => {
            // some temporal path from s reaches b while a holds strictly before
            let mut seen = BTreeSet::from([s]);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                if oracle(m, u, b) {
                    return true;
                }
                if oracle(m, u, a) {
                    for &v in &m.temporal[u] {
                        if seen.insert(v) {
                            stack.push(v);
                        }
                    }
                }
            }
            false
        }
        Formula::Forall(x, body) => m
            .domain
            .iter()
            .all(|c| oracle(m, s, &substitute(body, x, c))),
        Formula::Exists(x, body) => m
            .domain
            .iter()
            .any(|c| oracle(m, s, &substitute(body, x, c))),
    }
}

/// The same model in the library's representation, over propositional atoms `names`.
pub fn to_kripke(m: &PlainModel, names: &[&str]) -> KripkeModel {
    let sig = Arc::new(Signature::propositional(names).unwrap());
    let mut k = KripkeModel::new(sig, m.len()).unwrap();
    for s in 0..m.len() {
        for &t in &m.temporal[s] {
            k.add_temporal_edge(s, t).unwrap();
        }
        for &t in &m.deontic[s] {
            k.add_deontic_edge(s, t).unwrap();
        }
        for a in &m.truth[s] {
            k.set(a, &[], s, true).unwrap();
        }
    }
    k
}

pub fn to_trace(m: &PlainModel, names: &[&str]) -> TraceModel {
    let sig = Arc::new(Signature::propositional(names).unwrap());
    let mut t = TraceModel::new(sig, m.len()).unwrap();
    for s in 0..m.len() {
        t.set_deontic_successors(s, m.deontic[s].iter().copied().collect())
            .unwrap();
        for a in &m.truth[s] {
            t.set(a, &[], s, true).unwrap();
        }
    }
    t
}

pub const ATOMS: [&str; 2] = ["p", "q"];

/// Propositional formulas over `ATOMS` with every connective and modality.
pub fn formula_strategy(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(ATOMS.to_vec()).prop_map(Formula::prop);
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.clone().prop_map(Formula::oblig),
            inner.clone().prop_map(Formula::perm),
            inner.clone().prop_map(Formula::forb),
            inner.clone().prop_map(Formula::always),
            inner.clone().prop_map(Formula::eventually),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::until(a, b)),
        ]
    })
}

/// Uniform-ish random formula of depth at most `depth`, for seeded loops outside proptest.
pub fn random_formula(rng: &mut impl Rng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return Formula::prop(ATOMS[rng.gen_range(0..ATOMS.len())]);
    }
    let op = rng.gen_range(0..10);
    let mut sub = || random_formula(rng, depth - 1);
    match op {
        0 => Formula::not(sub()),
        1 => Formula::and(sub(), sub()),
        2 => Formula::or(sub(), sub()),
        3 => Formula::implies(sub(), sub()),
        4 => Formula::oblig(sub()),
        5 => Formula::perm(sub()),
        6 => Formula::forb(sub()),
        7 => Formula::always(sub()),
        8 => Formula::eventually(sub()),
        _ => Formula::until(sub(), sub()),
    }
}

fn subset_of(mask: u64, n: usize) -> BTreeSet<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn random_trace(rng: &mut impl Rng, max_len: usize) -> PlainModel {
    let n = rng.gen_range(1..=max_len);
    let truth = (0..n)
        .map(|_| {
            ATOMS
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .map(|a| a.to_string())
                .collect()
        })
        .collect();
    let deontic = (0..n).map(|_| subset_of(rng.gen::<u64>(), n)).collect();
    PlainModel::trace(truth, deontic)
}

/// Arbitrary relations, not just chains.
pub fn random_kripke(rng: &mut impl Rng, max_len: usize) -> PlainModel {
    let n = rng.gen_range(1..=max_len);
    PlainModel {
        truth: (0..n)
            .map(|_| {
                ATOMS
                    .iter()
                    .filter(|_| rng.gen_bool(0.5))
                    .map(|a| a.to_string())
                    .collect()
            })
            .collect(),
        temporal: (0..n).map(|_| subset_of(rng.gen::<u64>(), n)).collect(),
        deontic: (0..n).map(|_| subset_of(rng.gen::<u64>(), n)).collect(),
        domain: Vec::new(),
    }
}

pub fn trace_strategy(max_len: usize) -> impl Strategy<Value = PlainModel> {
    any::<u64>().prop_map(move |seed| {
        use rand::SeedableRng;
        random_trace(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), max_len)
    })
}

pub fn kripke_strategy(max_len: usize) -> impl Strategy<Value = PlainModel> {
    any::<u64>().prop_map(move |seed| {
        use rand::SeedableRng;
        random_kripke(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), max_len)
    })
}

pub mod fixtures;

/// A trace over `ATOMS` packed into bytes: bit `a` of `val[k]` is atom `a` at position `k`,
/// bit `j` of `deo[k]` is a deontic edge `k -> j`.
#[derive(Debug, Clone, Copy)]
pub struct BitTrace {
    pub n: usize,
    pub val: [u8; 4],
    pub deo: [u8; 4],
}

/// Same clauses as [`oracle`], over a [`BitTrace`].
pub fn bit_oracle(t: &BitTrace, k: usize, f: &Formula) -> bool {
    let succ = |k: usize| (0..t.n).filter(move |&j| t.deo[k] >> j & 1 == 1);
    match f {
        Formula::Atom(a) => {
            let bit = ATOMS
                .iter()
                .position(|x| *x == a.predicate)
                .expect("atom in ATOMS");
            t.val[k] >> bit & 1 == 1
        }
        Formula::Not(a) => !bit_oracle(t, k, a),
        Formula::And(a, b) => bit_oracle(t, k, a) && bit_oracle(t, k, b),
        Formula::Or(a, b) => bit_oracle(t, k, a) || bit_oracle(t, k, b),
        Formula::Implies(a, b) => !bit_oracle(t, k, a) || bit_oracle(t, k, b),
        Formula::Oblig(a) => succ(k).all(|j| bit_oracle(t, j, a)),
        Formula::Perm(a) => succ(k).any(|j| bit_oracle(t, j, a)),
        Formula::Forb(a) => succ(k).all(|j| !bit_oracle(t, j, a)),
        Formula::Always(a) => (k..t.n).all(|j| bit_oracle(t, j, a)),
        Formula::Eventually(a) => (k..t.n).any(|j| bit_oracle(t, j, a)),
        Formula::Until(a, b) => {
            (k..t.n).any(|j| bit_oracle(t, j, b) && (k..j).all(|i| bit_oracle(t, i, a)))
        }
        Formula::Forall(..) | Formula::Exists(..) => panic!("bit oracle is propositional"),
    }
}
