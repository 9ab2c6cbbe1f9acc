use std::collections::BTreeSet;

/// Argument of an atom: a variable (bindable by a quantifier) or a domain constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

/// A predicate symbol applied to a list of terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn symbol(&self) -> PredicateSymbol {
        PredicateSymbol::new(self.predicate.clone(), self.args.len())
    }
}

/// Name and arity of a predicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateSymbol {
    pub name: String,
    pub arity: usize,
}

impl PredicateSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        PredicateSymbol {
            name: name.into(),
            arity,
        }
    }
}

/// Temporal deontic formula.
///
/// `Forb` is a primitive node so that prohibitions survive a print/parse cycle;
/// [`Formula::normalize_duals`](crate::formula::normalize_duals) rewrites it (and `Perm`) in terms of `Oblig`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Oblig(Box<Formula>),
    Perm(Box<Formula>),
    Forb(Box<Formula>),
    Always(Box<Formula>),
    Eventually(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom(Atom::new(predicate, args))
    }

    /// Nullary atom.
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Atom(Atom::new(name, Vec::new()))
    }

    /// Atom whose arguments are all variables.
    pub fn pred(name: impl Into<String>, vars: &[&str]) -> Self {
        Formula::Atom(Atom::new(
            name,
            vars.iter().map(|v| Term::var(*v)).collect(),
        ))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// `(a -> b) & (b -> a)`; there is no dedicated biconditional node.
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn oblig(f: Formula) -> Self {
        Formula::Oblig(Box::new(f))
    }

    pub fn perm(f: Formula) -> Self {
        Formula::Perm(Box::new(f))
    }

    pub fn forb(f: Formula) -> Self {
        Formula::Forb(Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Box::new(f))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, f: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(f))
    }

    pub fn exists(v: impl Into<String>, f: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(f))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Height of the tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .iter()
            .map(|c| 1 + c.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) => vec![],
            Formula::Not(a)
            | Formula::Oblig(a)
            | Formula::Perm(a)
            | Formula::Forb(a)
            | Formula::Always(a)
            | Formula::Eventually(a)
            | Formula::Forall(_, a)
            | Formula::Exists(_, a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b) => vec![a, b],
        }
    }

    /// Every atom occurring in the formula, in left-to-right order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        if let Formula::Atom(a) = self {
            out.push(a);
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Predicate symbols used anywhere in the formula.
    pub fn predicate_symbols(&self) -> BTreeSet<PredicateSymbol> {
        self.atoms().into_iter().map(Atom::symbol).collect()
    }

    pub fn has_deontic(&self) -> bool {
        matches!(
            self,
            Formula::Oblig(_) | Formula::Perm(_) | Formula::Forb(_)
        ) || self.children().iter().any(|c| c.has_deontic())
    }

    pub fn has_temporal(&self) -> bool {
        matches!(
            self,
            Formula::Always(_) | Formula::Eventually(_) | Formula::Until(_, _)
        ) || self.children().iter().any(|c| c.has_temporal())
    }
}
