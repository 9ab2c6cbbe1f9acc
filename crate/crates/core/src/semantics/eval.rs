//! Satisfaction relation.
//!
//! Formulas are compiled once against a [`Signature`] and an [`Assignment`]: quantifiers are
//! expanded over the constant domain and atoms resolved to ids. The compiled form is then
//! labelled bottom-up, producing the set of satisfying states for every subformula.
//!
//! General models: `[]`/`<>` range over the reflexive-transitive temporal image, `U` is the
//! least fixpoint `psi | (phi & pre(.))`, `O`/`P`/`Forb` range over the deontic image.
//! Traces: `[]`/`<>`/`U` use positions `j >= k` (finite-trace semantics).

use super::model::{bits, KripkeModel, TraceModel};
use super::{Assignment, SemanticsError, Signature};
use crate::formula::{Formula, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    AndAll(usize, usize),
    OrAll(usize, usize),
    Oblig(usize),
    Perm(usize),
    Forb(usize),
    Always(usize),
    Eventually(usize),
    Until(usize, usize),
}

/// A formula resolved against a signature and variable assignment.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    ops: Vec<Op>,
    // operand lists for AndAll/OrAll: (start, len) into `lists`
    lists: Vec<usize>,
    temporal: bool,
}

struct Compiler<'a> {
    sig: &'a Signature,
    env: Vec<(String, usize)>,
    ops: Vec<Op>,
    lists: Vec<usize>,
}

impl Compiler<'_> {
    fn push(&mut self, op: Op) -> usize {
        self.ops.push(op);
        self.ops.len() - 1
    }

    fn resolve(&self, t: &Term) -> Result<usize, SemanticsError> {
        match t {
            Term::Var(v) => self
                .env
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|&(_, d)| d)
                .ok_or_else(|| SemanticsError::UnboundVariable(v.clone())),
            Term::Const(c) => self
                .sig
                .constant_index(c)
                .ok_or_else(|| SemanticsError::UnknownConstant(c.clone())),
        }
    }

    fn compile(&mut self, f: &Formula) -> Result<usize, SemanticsError> {
        let op = match f {
            Formula::Atom(a) => {
                if self.sig.predicate(&a.predicate).is_none() {
                    return Err(SemanticsError::UnknownPredicate(a.predicate.clone()));
                }
                let args = a
                    .args
                    .iter()
                    .map(|t| self.resolve(t))
                    .collect::<Result<Vec<_>, _>>()?;
                Op::Atom(self.sig.atom_id_by_index(&a.predicate, &args)?)
            }
            Formula::Not(g) => Op::Not(self.compile(g)?),
            Formula::And(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                Op::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                Op::Or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                Op::Implies(a, b)
            }
            Formula::Until(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                Op::Until(a, b)
            }
            Formula::Oblig(g) => Op::Oblig(self.compile(g)?),
            Formula::Perm(g) => Op::Perm(self.compile(g)?),
            Formula::Forb(g) => Op::Forb(self.compile(g)?),
            Formula::Always(g) => Op::Always(self.compile(g)?),
            Formula::Eventually(g) => Op::Eventually(self.compile(g)?),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let mut parts = Vec::with_capacity(self.sig.domain().len());
                for d in 0..self.sig.domain().len() {
                    self.env.push((v.clone(), d));
                    let r = self.compile(g);
                    self.env.pop();
                    parts.push(r?);
                }
                let start = self.lists.len();
                self.lists.extend_from_slice(&parts);
                if matches!(f, Formula::Forall(..)) {
                    Op::AndAll(start, parts.len())
                } else {
                    Op::OrAll(start, parts.len())
                }
            }
        };
        Ok(self.push(op))
    }
}

impl CompiledFormula {
    pub fn compile(
        f: &Formula,
        sig: &Signature,
        sigma: &Assignment,
    ) -> Result<Self, SemanticsError> {
        let env = sigma
            .iter()
            .map(|(v, c)| {
                sig.constant_index(c)
                    .map(|d| (v.to_string(), d))
                    .ok_or_else(|| SemanticsError::UnknownConstant(c.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut c = Compiler {
            sig,
            env,
            ops: Vec::new(),
            lists: Vec::new(),
        };
        c.compile(f)?;
        let temporal = c
            .ops
            .iter()
            .any(|op| matches!(op, Op::Always(_) | Op::Eventually(_)));
        Ok(CompiledFormula {
            ops: c.ops,
            lists: c.lists,
            temporal,
        })
    }

    /// Bitmask of the states of `m` that satisfy the formula. Labels are written to `scratch`.
    pub fn satisfying_states_with(&self, m: &KripkeModel, scratch: &mut Vec<u64>) -> u64 {
        let all = m.all_states();
        let n = m.num_states();
        let reach = if self.temporal {
            m.temporal_reach()
        } else {
            Vec::new()
        };
        scratch.clear();
        scratch.reserve(self.ops.len());
        for op in &self.ops {
            let l = |i: usize| scratch[i];
            let label = match *op {
                Op::Atom(a) => (0..n)
                    .filter(|&s| m.valuation.get(s, a))
                    .fold(0, |acc, s| acc | 1 << s),
                Op::Not(a) => all & !l(a),
                Op::And(a, b) => l(a) & l(b),
                Op::Or(a, b) => l(a) | l(b),
                Op::Implies(a, b) => (all & !l(a)) | l(b),
                Op::AndAll(start, len) => self.lists[start..start + len]
                    .iter()
                    .fold(all, |acc, &i| acc & scratch[i]),
                Op::OrAll(start, len) => self.lists[start..start + len]
                    .iter()
                    .fold(0, |acc, &i| acc | scratch[i]),
                Op::Oblig(a) => select(n, |s| m.deontic[s] & !l(a) == 0),
                Op::Perm(a) => select(n, |s| m.deontic[s] & l(a) != 0),
                Op::Forb(a) => select(n, |s| m.deontic[s] & l(a) == 0),
                Op::Always(a) => select(n, |s| reach[s] & !l(a) == 0),
                Op::Eventually(a) => select(n, |s| reach[s] & l(a) != 0),
                Op::Until(a, b) => {
                    let (phi, mut z) = (l(a), l(b));
                    loop {
                        let pre = select(n, |s| m.temporal[s] & z != 0);
                        let next = z | (phi & pre);
                        if next == z {
                            break z;
                        }
                        z = next;
                    }
                }
            };
            scratch.push(label);
        }
        *scratch.last().expect("compiled formula is never empty")
    }

    pub fn satisfying_states(&self, m: &KripkeModel) -> u64 {
        self.satisfying_states_with(m, &mut Vec::new())
    }

    /// Truth value at every position of the trace. `scratch` holds one row per subformula.
    pub fn trace_truth_with(&self, t: &TraceModel, scratch: &mut Vec<bool>) -> Vec<bool> {
        let n = t.len();
        scratch.clear();
        scratch.resize(self.ops.len() * n, false);
        for (idx, op) in self.ops.iter().enumerate() {
            let (done, rest) = scratch.split_at_mut(idx * n);
            let out = &mut rest[..n];
            let row = |i: usize| &done[i * n..(i + 1) * n];
            match *op {
                Op::Atom(a) => {
                    for (k, o) in out.iter_mut().enumerate() {
                        *o = t.valuation.get(k, a);
                    }
                }
                Op::Not(a) => zip1(out, row(a), |x| !x),
                Op::And(a, b) => zip2(out, row(a), row(b), |x, y| x && y),
                Op::Or(a, b) => zip2(out, row(a), row(b), |x, y| x || y),
                Op::Implies(a, b) => zip2(out, row(a), row(b), |x, y| !x || y),
                Op::AndAll(start, len) => {
                    out.fill(true);
                    for &i in &self.lists[start..start + len] {
                        for (o, &x) in out.iter_mut().zip(row(i)) {
                            *o &= x;
                        }
                    }
                }
                Op::OrAll(start, len) => {
                    out.fill(false);
                    for &i in &self.lists[start..start + len] {
                        for (o, &x) in out.iter_mut().zip(row(i)) {
                            *o |= x;
                        }
                    }
                }
                Op::Oblig(a) => {
                    let r = row(a);
                    for (k, o) in out.iter_mut().enumerate() {
                        *o = t.deontic[k].iter().all(|&j| r[j]);
                    }
                }
                Op::Perm(a) => {
                    let r = row(a);
                    for (k, o) in out.iter_mut().enumerate() {
                        *o = t.deontic[k].iter().any(|&j| r[j]);
                    }
                }
                Op::Forb(a) => {
                    let r = row(a);
                    for (k, o) in out.iter_mut().enumerate() {
                        *o = !t.deontic[k].iter().any(|&j| r[j]);
                    }
                }
                Op::Always(a) => {
                    let r = row(a);
                    let mut acc = true;
                    for k in (0..n).rev() {
                        acc &= r[k];
                        out[k] = acc;
                    }
                }
                Op::Eventually(a) => {
                    let r = row(a);
                    let mut acc = false;
                    for k in (0..n).rev() {
                        acc |= r[k];
                        out[k] = acc;
                    }
                }
                Op::Until(a, b) => {
                    let (phi, psi) = (row(a), row(b));
                    let mut acc = false;
                    for k in (0..n).rev() {
                        acc = psi[k] || (phi[k] && acc);
                        out[k] = acc;
                    }
                }
            }
        }
        scratch[(self.ops.len() - 1) * n..].to_vec()
    }

    pub fn trace_truth(&self, t: &TraceModel) -> Vec<bool> {
        self.trace_truth_with(t, &mut Vec::new())
    }
}

fn select(n: usize, pred: impl Fn(usize) -> bool) -> u64 {
    (0..n).filter(|&s| pred(s)).fold(0, |acc, s| acc | 1 << s)
}

fn zip1(out: &mut [bool], a: &[bool], f: impl Fn(bool) -> bool) {
    for (o, &x) in out.iter_mut().zip(a) {
        *o = f(x);
    }
}

fn zip2(out: &mut [bool], a: &[bool], b: &[bool], f: impl Fn(bool, bool) -> bool) {
    for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
        *o = f(x, y);
    }
}

/// `M, s, sigma |= f` on a general finite model.
pub fn evaluate(
    m: &KripkeModel,
    s: usize,
    sigma: &Assignment,
    f: &Formula,
) -> Result<bool, SemanticsError> {
    if s >= m.num_states() {
        return Err(SemanticsError::StateOutOfRange {
            index: s,
            len: m.num_states(),
        });
    }
    let c = CompiledFormula::compile(f, m.signature(), sigma)?;
    Ok(c.satisfying_states(m) >> s & 1 == 1)
}

/// `T, k, sigma |= f` with finite-trace semantics.
pub fn evaluate_trace(
    t: &TraceModel,
    k: usize,
    sigma: &Assignment,
    f: &Formula,
) -> Result<bool, SemanticsError> {
    if k >= t.len() {
        return Err(SemanticsError::StateOutOfRange {
            index: k,
            len: t.len(),
        });
    }
    let c = CompiledFormula::compile(f, t.signature(), sigma)?;
    Ok(c.trace_truth(t)[k])
}

/// Names of the states of `m` satisfying `f`, in state order.
pub fn satisfying_state_names(
    m: &KripkeModel,
    sigma: &Assignment,
    f: &Formula,
) -> Result<Vec<String>, SemanticsError> {
    let c = CompiledFormula::compile(f, m.signature(), sigma)?;
    Ok(bits(c.satisfying_states(m))
        .map(|s| m.state_name(s).to_string())
        .collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::formula::parse_formula;

    fn sig(names: &[&str]) -> Arc<Signature> {
        Arc::new(Signature::propositional(names).unwrap())
    }

    fn eval(m: &KripkeModel, s: usize, text: &str) -> bool {
        evaluate(m, s, &Assignment::new(), &parse_formula(text).unwrap()).unwrap()
    }

    fn chain(n: usize, names: &[&str]) -> KripkeModel {
        let mut m = KripkeModel::new(sig(names), n).unwrap();
        for s in 0..n - 1 {
            m.add_temporal_edge(s, s + 1).unwrap();
        }
        m
    }

    #[test]
    fn always_on_two_state_chain() {
        let mut m = chain(2, &["p"]);
        m.set("p", &[], 0, true).unwrap();
        m.set("p", &[], 1, true).unwrap();
        assert!(eval(&m, 0, "[](p)"));
        m.set("p", &[], 1, false).unwrap();
        assert!(!eval(&m, 0, "[]p"));
    }

    #[test]
    fn deontic_dead_end() {
        let mut m = KripkeModel::new(sig(&["p"]), 1).unwrap();
        m.set("p", &[], 0, true).unwrap();
        assert!(eval(&m, 0, "O(p)"));
        assert!(!eval(&m, 0, "P(p)"));
        assert!(eval(&m, 0, "Forb(p)"));
    }

    #[test]
    fn until_on_three_state_chain() {
        let mut m = chain(3, &["p", "q"]);
        m.set("p", &[], 0, true).unwrap();
        m.set("p", &[], 1, true).unwrap();
        m.set("q", &[], 2, true).unwrap();
        assert!(eval(&m, 0, "p U q"));
        m.set("q", &[], 2, false).unwrap();
        assert!(!eval(&m, 0, "p U q"));
    }

    #[test]
    fn until_on_branching_graph() {
        // s0 -> s1 (p, dead end), s0 -> s2 -> s3 (q); p at s0 and s2
        let mut m = KripkeModel::new(sig(&["p", "q"]), 4).unwrap();
        m.add_temporal_edge(0, 1).unwrap();
        m.add_temporal_edge(0, 2).unwrap();
        m.add_temporal_edge(2, 3).unwrap();
        m.set("p", &[], 0, true).unwrap();
        m.set("p", &[], 1, true).unwrap();
        m.set("p", &[], 2, true).unwrap();
        m.set("q", &[], 3, true).unwrap();
        assert!(eval(&m, 0, "p U q"));
        m.set("p", &[], 2, false).unwrap();
        assert!(!eval(&m, 0, "p U q"));
    }

    #[test]
    fn trace_examples() {
        let s = sig(&["p", "q", "f"]);
        let mut t = TraceModel::new(s.clone(), 1).unwrap();
        t.set("p", &[], 0, true).unwrap();
        let f = |x: &str| parse_formula(x).unwrap();
        let none = Assignment::new();
        assert!(evaluate_trace(&t, 0, &none, &f("<>(p)")).unwrap());

        let mut t = TraceModel::new(s, 4).unwrap();
        t.set("f", &[], 2, true).unwrap();
        t.set("f", &[], 3, true).unwrap();
        assert!(evaluate_trace(&t, 0, &none, &f("!f U f")).unwrap());
        assert!(!evaluate_trace(&t, 0, &none, &f("[](f)")).unwrap());
        // last position: p U q reduces to q
        for q in [false, true] {
            t.set("q", &[], 3, q).unwrap();
            assert_eq!(evaluate_trace(&t, 3, &none, &f("p U q")).unwrap(), q);
        }
        assert!(matches!(
            evaluate_trace(&t, 4, &none, &f("p")),
            Err(SemanticsError::StateOutOfRange { index: 4, len: 4 })
        ));
    }

    #[test]
    fn quantifiers_and_errors() {
        let s = Arc::new(
            Signature::new(
                vec![crate::formula::PredicateSymbol::new("fair", 1)],
                vec!["a".into(), "b".into()],
            )
            .unwrap(),
        );
        let mut m = KripkeModel::new(s, 1).unwrap();
        m.set("fair", &["a"], 0, true).unwrap();
        let f = |x: &str| parse_formula(x).unwrap();
        assert!(evaluate(&m, 0, &Assignment::new(), &f("exists x. fair(x)")).unwrap());
        assert!(!evaluate(&m, 0, &Assignment::new(), &f("forall x. fair(x)")).unwrap());
        assert!(evaluate(&m, 0, &Assignment::new().with("x", "a"), &f("fair(x)")).unwrap());
        assert!(matches!(
            evaluate(&m, 0, &Assignment::new(), &f("fair(x)")),
            Err(SemanticsError::UnboundVariable(v)) if v == "x"
        ));
        assert!(matches!(
            evaluate(&m, 0, &Assignment::new(), &f("bias(\"a\")")),
            Err(SemanticsError::UnknownPredicate(_))
        ));
        assert!(matches!(
            evaluate(&m, 0, &Assignment::new(), &f("fair")),
            Err(SemanticsError::ArityMismatch {
                expected: 1,
                found: 0,
                ..
            })
        ));
    }
}
