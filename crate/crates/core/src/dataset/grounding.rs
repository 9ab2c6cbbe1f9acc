use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::formula::{free_variables, Formula, Term};
use crate::semantics::{KripkeModel, Signature};

use super::{Bindings, Dataset, DatasetError, Rule, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Deontic and temporal operators collapse as on a single state that is its own ideal
    /// world: `O`, `P`, `[]`, `<>` pass through, `Forb` negates, `a U b` becomes `b`.
    #[default]
    Reproduction,
    /// Deontic operators are refused.
    Strict,
}

impl std::str::FromStr for Mode {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reproduction" => Ok(Mode::Reproduction),
            "strict" => Ok(Mode::Strict),
            other => Err(DatasetError::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Reproduction => "reproduction",
            Mode::Strict => "strict",
        })
    }
}

/// Whether pair quantifiers guarded by `similar`/`flip` enumerate only rows sharing the same
/// nonsensitive values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairIndex {
    /// Index when the domain has more than [`PAIR_INDEX_ROWS`] rows.
    #[default]
    Auto,
    Always,
    Never,
}

pub const PAIR_INDEX_ROWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GroundOptions {
    pub mode: Mode,
    pub pair_index: PairIndex,
}

/// A bound predicate applied to concrete rows, with its value fixed by the dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundedAtom {
    pub predicate: String,
    pub rows: Vec<usize>,
    pub ids: Vec<String>,
    pub value: bool,
    pub requirement: String,
    pub negated_requirement: String,
    pub evidence: String,
}

impl fmt::Display for GroundedAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.predicate, self.ids.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub rows: Vec<usize>,
    pub body: Node,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantified {
    pub vars: Vec<String>,
    pub instances: Vec<Instance>,
    /// Tuples skipped by the pair index; their instances are vacuously true.
    pub omitted: u64,
}

/// Quantifier-free circuit. Quantifiers are kept as labelled conjunctions/disjunctions so that
/// failing instances can be reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Const(bool),
    Atom(usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Forall(Quantified),
    Exists(Quantified),
}

impl Node {
    pub fn eval(&self, atoms: &[GroundedAtom]) -> bool {
        self.eval_with(&|i| atoms[i].value)
    }

    /// Evaluation under an arbitrary atom valuation.
    pub fn eval_with(&self, value: &dyn Fn(usize) -> bool) -> bool {
        match self {
            Node::Const(b) => *b,
            Node::Atom(i) => value(*i),
            Node::Not(n) => !n.eval_with(value),
            Node::And(ns) => ns.iter().all(|n| n.eval_with(value)),
            Node::Or(ns) => ns.iter().any(|n| n.eval_with(value)),
            Node::Implies(a, b) => !a.eval_with(value) || b.eval_with(value),
            Node::Forall(q) => q.instances.iter().all(|i| i.body.eval_with(value)),
            Node::Exists(q) => q.instances.iter().any(|i| i.body.eval_with(value)),
        }
    }

    /// Atom indices in first-occurrence order.
    pub fn atom_ids(&self) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_atoms(&mut seen, &mut out);
        out
    }

    fn collect_atoms(&self, seen: &mut BTreeSet<usize>, out: &mut Vec<usize>) {
        match self {
            Node::Const(_) => {}
            Node::Atom(i) => {
                if seen.insert(*i) {
                    out.push(*i);
                }
            }
            Node::Not(n) => n.collect_atoms(seen, out),
            Node::And(ns) | Node::Or(ns) => ns.iter().for_each(|n| n.collect_atoms(seen, out)),
            Node::Implies(a, b) => {
                a.collect_atoms(seen, out);
                b.collect_atoms(seen, out);
            }
            Node::Forall(q) | Node::Exists(q) => q
                .instances
                .iter()
                .for_each(|i| i.body.collect_atoms(seen, out)),
        }
    }

    /// Formula-style rendering with grounded atom names.
    pub fn render(&self, atoms: &[GroundedAtom]) -> String {
        self.render_prec(atoms, 0)
    }

    fn render_prec(&self, atoms: &[GroundedAtom], ctx: u8) -> String {
        let (prec, s) = match self {
            Node::Const(b) => (
                9,
                if *b {
                    "true".to_string()
                } else {
                    "false".to_string()
                },
            ),
            Node::Atom(i) => (9, atoms[*i].to_string()),
            Node::Not(n) => (6, format!("!{}", n.render_prec(atoms, 6))),
            Node::And(ns) if ns.is_empty() => (9, "true".to_string()),
            Node::Or(ns) if ns.is_empty() => (9, "false".to_string()),
            Node::And(ns) => (
                4,
                ns.iter()
                    .map(|n| n.render_prec(atoms, 5))
                    .collect::<Vec<_>>()
                    .join(" & "),
            ),
            Node::Or(ns) => (
                3,
                ns.iter()
                    .map(|n| n.render_prec(atoms, 4))
                    .collect::<Vec<_>>()
                    .join(" | "),
            ),
            Node::Implies(a, b) => (
                2,
                format!("{} -> {}", a.render_prec(atoms, 3), b.render_prec(atoms, 2)),
            ),
            Node::Forall(q) | Node::Exists(q) => {
                let word = if matches!(self, Node::Forall(_)) {
                    "forall"
                } else {
                    "exists"
                };
                (
                    0,
                    format!(
                        "{word} {} over {} instance(s)",
                        q.vars.join(","),
                        q.instances.len() as u64 + q.omitted
                    ),
                )
            }
        };
        if prec < ctx {
            format!("({s})")
        } else {
            s
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedRow {
    pub id: String,
    pub column: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundedProperty {
    pub id: String,
    pub formula: Formula,
    pub mode: Mode,
    pub root: Node,
    pub atoms: Vec<GroundedAtom>,
    /// Row positions the quantifiers ranged over, in file order.
    pub domain: Vec<usize>,
    /// Id of every dataset row, by position.
    pub row_ids: Vec<String>,
    pub skipped: Vec<SkippedRow>,
    pub warnings: Vec<String>,
}

impl GroundedProperty {
    pub fn eval(&self) -> bool {
        self.root.eval(&self.atoms)
    }

    /// Instances of an outermost universal block (the top-level conjuncts), or the whole
    /// circuit as a single clause.
    pub fn top_level(&self) -> Vec<(Vec<usize>, &Node)> {
        match &self.root {
            Node::Forall(q) => q
                .instances
                .iter()
                .map(|i| (i.rows.clone(), &i.body))
                .collect(),
            other => {
                let mut rows: Vec<usize> = other
                    .atom_ids()
                    .into_iter()
                    .flat_map(|a| self.atoms[a].rows.clone())
                    .collect();
                rows.sort_unstable();
                rows.dedup();
                vec![(rows, other)]
            }
        }
    }

    /// Number of ground instances of single- and two-variable quantifier blocks.
    pub fn instance_counts(&self) -> (u64, u64) {
        fn walk(n: &Node, rows: &mut u64, pairs: &mut u64) {
            match n {
                Node::Forall(q) | Node::Exists(q) => {
                    let count = q.instances.len() as u64 + q.omitted;
                    match q.vars.len() {
                        1 => *rows += count,
                        _ => *pairs += count,
                    }
                    for i in &q.instances {
                        walk(&i.body, rows, pairs);
                    }
                }
                Node::Not(a) => walk(a, rows, pairs),
                Node::Implies(a, b) => {
                    walk(a, rows, pairs);
                    walk(b, rows, pairs);
                }
                Node::And(ns) | Node::Or(ns) => ns.iter().for_each(|x| walk(x, rows, pairs)),
                Node::Const(_) | Node::Atom(_) => {}
            }
        }
        let (mut rows, mut pairs) = (0, 0);
        walk(&self.root, &mut rows, &mut pairs);
        (rows, pairs)
    }
}

struct Grounder<'a> {
    d: &'a Dataset,
    b: &'a Bindings,
    domain: &'a [usize],
    use_index: bool,
    atoms: Vec<GroundedAtom>,
    index: HashMap<(String, Vec<usize>), usize>,
    mode: Mode,
    id: &'a str,
}

impl Grounder<'_> {
    fn atom(
        &mut self,
        predicate: &str,
        args: &[Term],
        env: &[(String, usize)],
    ) -> Result<Node, DatasetError> {
        let binding = self
            .b
            .get(predicate)
            .ok_or_else(|| DatasetError::MissingBinding(predicate.to_string()))?;
        if binding.arity != args.len() {
            return Err(DatasetError::ArityMismatch {
                predicate: predicate.to_string(),
                expected: binding.arity,
                found: args.len(),
            });
        }
        let rows = args
            .iter()
            .map(|t| match t {
                Term::Var(v) => env
                    .iter()
                    .rev()
                    .find(|(n, _)| n == v)
                    .map(|&(_, r)| r)
                    .ok_or_else(|| DatasetError::UnboundVariable(v.clone())),
                Term::Const(c) => self
                    .d
                    .row_index(c)
                    .ok_or_else(|| DatasetError::UnknownRow(c.clone())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let key = (predicate.to_string(), rows);
        if let Some(&i) = self.index.get(&key) {
            return Ok(Node::Atom(i));
        }
        let rule = &binding.rule;
        let rows = key.1.clone();
        let atom = GroundedAtom {
            predicate: predicate.to_string(),
            ids: rows.iter().map(|&r| self.d.id(r).to_string()).collect(),
            value: rule.eval(self.d, &rows, self.domain),
            requirement: rule.requirement(),
            negated_requirement: rule.negated_requirement(),
            evidence: rule.evidence(self.d, &rows, self.domain),
            rows,
        };
        let i = self.atoms.len();
        self.atoms.push(atom);
        self.index.insert(key, i);
        Ok(Node::Atom(i))
    }

    fn ground(
        &mut self,
        f: &Formula,
        env: &mut Vec<(String, usize)>,
    ) -> Result<Node, DatasetError> {
        let two =
            |g: &mut Self,
             a: &Formula,
             b: &Formula,
             env: &mut Vec<(String, usize)>|
             -> Result<_, DatasetError> { Ok((g.ground(a, env)?, g.ground(b, env)?)) };
        Ok(match f {
            Formula::Atom(a) => self.atom(&a.predicate, &a.args, env)?,
            Formula::Not(a) => Node::Not(Box::new(self.ground(a, env)?)),
            Formula::And(a, b) => {
                let (x, y) = two(self, a, b, env)?;
                Node::And(vec![x, y])
            }
            Formula::Or(a, b) => {
                let (x, y) = two(self, a, b, env)?;
                Node::Or(vec![x, y])
            }
            Formula::Implies(a, b) => {
                let (x, y) = two(self, a, b, env)?;
                Node::Implies(Box::new(x), Box::new(y))
            }
            Formula::Oblig(a) | Formula::Perm(a) | Formula::Forb(a) => {
                if self.mode == Mode::Strict {
                    return Err(DatasetError::DeonticInStrictMode(self.id.to_string()));
                }
                let inner = self.ground(a, env)?;
                if matches!(f, Formula::Forb(_)) {
                    Node::Not(Box::new(inner))
                } else {
                    inner
                }
            }
            Formula::Always(a) | Formula::Eventually(a) => self.ground(a, env)?,
            Formula::Until(_, b) => self.ground(b, env)?,
            Formula::Forall(..) | Formula::Exists(..) => {
                let universal = matches!(f, Formula::Forall(..));
                let mut vars = Vec::new();
                let mut body = f;
                while let (Formula::Forall(v, inner), true) | (Formula::Exists(v, inner), false) =
                    (body, universal)
                {
                    vars.push(v.clone());
                    body = inner;
                }
                let q = self.expand(&vars, body, universal, env)?;
                if universal {
                    Node::Forall(q)
                } else {
                    Node::Exists(q)
                }
            }
        })
    }

    /// Rule of `similar`/`flip` guarding an implication over exactly the two block variables.
    fn pair_guard(&self, vars: &[String], body: &Formula) -> Option<Vec<String>> {
        if !self.use_index || vars.len() != 2 {
            return None;
        }
        let Formula::Implies(guard, _) = body else {
            return None;
        };
        let Formula::Atom(a) = &**guard else {
            return None;
        };
        let is_block_pair =
            matches!(&a.args[..], [Term::Var(x), Term::Var(y)] if *x == vars[0] && *y == vars[1]);
        if !is_block_pair {
            return None;
        }
        match &self.b.get(&a.predicate)?.rule {
            Rule::Similar { columns } => Some(columns.clone()),
            Rule::Flip { nonsensitive, .. } => Some(nonsensitive.clone()),
            _ => None,
        }
    }

    fn expand(
        &mut self,
        vars: &[String],
        body: &Formula,
        universal: bool,
        env: &mut Vec<(String, usize)>,
    ) -> Result<Quantified, DatasetError> {
        let domain = self.domain;
        let n = domain.len() as u64;
        let total = n.checked_pow(vars.len() as u32).unwrap_or(u64::MAX);
        let tuples: Vec<Vec<usize>> = match self.pair_guard(vars, body).filter(|_| universal) {
            Some(columns) => {
                // Values hold f64, so group on their debug rendering.
                let key = |r: usize| -> String {
                    let cells: Vec<Value> = columns
                        .iter()
                        .map(|c| self.d.value(r, c).cloned().unwrap_or(Value::Null))
                        .collect();
                    format!("{cells:?}")
                };
                let mut groups: HashMap<String, Vec<usize>> = HashMap::new();
                let keys: Vec<String> = domain.iter().map(|&r| key(r)).collect();
                for (&r, k) in domain.iter().zip(&keys) {
                    groups.entry(k.clone()).or_default().push(r);
                }
                let mut out = Vec::new();
                for (&i, k) in domain.iter().zip(&keys) {
                    out.extend(groups[k].iter().map(|&j| vec![i, j]));
                }
                out
            }
            None => {
                let mut out: Vec<Vec<usize>> = vec![Vec::new()];
                for _ in vars {
                    out = out
                        .into_iter()
                        .flat_map(|t| {
                            domain.iter().map(move |&r| {
                                let mut t = t.clone();
                                t.push(r);
                                t
                            })
                        })
                        .collect();
                }
                out
            }
        };
        let omitted = total - tuples.len() as u64;
        let mut instances = Vec::with_capacity(tuples.len());
        for rows in tuples {
            let depth = env.len();
            env.extend(vars.iter().cloned().zip(rows.iter().copied()));
            let node = self.ground(body, env);
            env.truncate(depth);
            instances.push(Instance { rows, body: node? });
        }
        Ok(Quantified {
            vars: vars.to_vec(),
            instances,
            omitted,
        })
    }
}

fn referenced_columns<'a>(f: &Formula, b: &'a Bindings) -> Result<Vec<&'a str>, DatasetError> {
    let mut cols = Vec::new();
    for sym in f.predicate_symbols() {
        let binding = b
            .get(&sym.name)
            .ok_or_else(|| DatasetError::MissingBinding(sym.name.clone()))?;
        for c in binding.rule.columns() {
            if !cols.contains(&c) {
                cols.push(c);
            }
        }
    }
    Ok(cols)
}

/// Rows usable for `f`: those with no null among the columns its bindings read.
pub fn usable_rows(
    d: &Dataset,
    b: &Bindings,
    f: &Formula,
) -> Result<(Vec<usize>, Vec<SkippedRow>), DatasetError> {
    let cols = referenced_columns(f, b)?;
    let mut domain = Vec::new();
    let mut skipped = Vec::new();
    for r in 0..d.len() {
        match cols
            .iter()
            .find(|c| d.value(r, c).is_none_or(Value::is_null))
        {
            Some(c) => skipped.push(SkippedRow {
                id: d.id(r).to_string(),
                column: c.to_string(),
            }),
            None => domain.push(r),
        }
    }
    Ok((domain, skipped))
}

pub fn ground_property(
    id: &str,
    f: &Formula,
    d: &Dataset,
    b: &Bindings,
) -> Result<GroundedProperty, DatasetError> {
    ground_property_with(id, f, d, b, GroundOptions::default())
}

/// Expands every quantifier over the usable rows and fixes every atom from the dataset.
pub fn ground_property_with(
    id: &str,
    f: &Formula,
    d: &Dataset,
    b: &Bindings,
    opts: GroundOptions,
) -> Result<GroundedProperty, DatasetError> {
    if let Some(v) = free_variables(f).into_iter().next() {
        return Err(DatasetError::UnboundVariable(v));
    }
    b.check_schema(d.schema())?;
    let (domain, skipped) = usable_rows(d, b, f)?;
    let use_index = match opts.pair_index {
        PairIndex::Always => true,
        PairIndex::Never => false,
        PairIndex::Auto => domain.len() > PAIR_INDEX_ROWS,
    };
    let mut g = Grounder {
        d,
        b,
        domain: &domain,
        use_index,
        atoms: Vec::new(),
        index: HashMap::new(),
        mode: opts.mode,
        id,
    };
    let root = g.ground(f, &mut Vec::new())?;
    let atoms = g.atoms;
    let mut warnings: Vec<String> = skipped
        .iter()
        .map(|s| format!("row {} skipped: null in {}", s.id, s.column))
        .collect();
    if domain.is_empty() {
        warnings.push("every row was skipped; quantifiers are vacuous".to_string());
    }
    Ok(GroundedProperty {
        id: id.to_string(),
        formula: f.clone(),
        mode: opts.mode,
        root,
        atoms,
        domain,
        row_ids: d.ids().to_vec(),
        skipped,
        warnings,
    })
}

/// The finite model a dataset induces for `f`: one state that is its own deontic alternative,
/// the usable rows as domain, and every bound predicate evaluated on every row tuple.
pub fn induced_model(d: &Dataset, b: &Bindings, f: &Formula) -> Result<KripkeModel, DatasetError> {
    let (domain, _) = usable_rows(d, b, f)?;
    let preds: Vec<_> = f.predicate_symbols().into_iter().collect();
    let ids: Vec<String> = domain.iter().map(|&r| d.id(r).to_string()).collect();
    let sig = Arc::new(
        Signature::new(preds.clone(), ids).map_err(|e| DatasetError::Model(e.to_string()))?,
    );
    let mut m = KripkeModel::new(sig.clone(), 1).map_err(|e| DatasetError::Model(e.to_string()))?;
    m.add_deontic_edge(0, 0)
        .map_err(|e| DatasetError::Model(e.to_string()))?;
    for p in &preds {
        let binding = b
            .get(&p.name)
            .ok_or_else(|| DatasetError::MissingBinding(p.name.clone()))?;
        if binding.arity != p.arity {
            return Err(DatasetError::ArityMismatch {
                predicate: p.name.clone(),
                expected: binding.arity,
                found: p.arity,
            });
        }
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..p.arity {
            tuples = tuples
                .into_iter()
                .flat_map(|t| (0..domain.len()).map(move |k| [t.clone(), vec![k]].concat()))
                .collect();
        }
        for t in tuples {
            let rows: Vec<usize> = t.iter().map(|&k| domain[k]).collect();
            if binding.rule.eval(d, &rows, &domain) {
                let id = sig
                    .atom_id_by_index(&p.name, &t)
                    .map_err(|e| DatasetError::Model(e.to_string()))?;
                m.set_atom(0, id, true)
                    .map_err(|e| DatasetError::Model(e.to_string()))?;
            }
        }
    }
    Ok(m)
}
