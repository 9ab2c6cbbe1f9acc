use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::formula::PredicateSymbol;

use super::SemanticsError;

/// A predicate symbol applied to domain constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<String>) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            args,
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(", "))?;
        }
        Ok(())
    }
}

/// Predicate vocabulary plus constant domain. Fixes a dense numbering of every ground atom:
/// predicates in declaration order, arguments in mixed radix over the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    predicates: Vec<PredicateSymbol>,
    domain: Vec<String>,
    offsets: Vec<usize>,
    atom_count: usize,
    by_name: HashMap<String, usize>,
    constants: HashMap<String, usize>,
}

impl Signature {
    pub fn new(
        predicates: Vec<PredicateSymbol>,
        domain: Vec<String>,
    ) -> Result<Self, SemanticsError> {
        let mut by_name = HashMap::new();
        let mut offsets = Vec::with_capacity(predicates.len());
        let mut total = 0usize;
        for (i, p) in predicates.iter().enumerate() {
            if by_name.insert(p.name.clone(), i).is_some() {
                return Err(SemanticsError::DuplicatePredicate(p.name.clone()));
            }
            offsets.push(total);
            let count = u32::try_from(p.arity)
                .ok()
                .and_then(|a| domain.len().checked_pow(a))
                .ok_or(SemanticsError::TooManyAtoms)?;
            total = total
                .checked_add(count)
                .ok_or(SemanticsError::TooManyAtoms)?;
        }
        let mut constants = HashMap::new();
        for (i, c) in domain.iter().enumerate() {
            if constants.insert(c.clone(), i).is_some() {
                return Err(SemanticsError::DuplicateConstant(c.clone()));
            }
        }
        Ok(Signature {
            predicates,
            domain,
            offsets,
            atom_count: total,
            by_name,
            constants,
        })
    }

    /// Nullary predicates only, empty domain.
    pub fn propositional<S: AsRef<str>>(names: &[S]) -> Result<Self, SemanticsError> {
        Signature::new(
            names
                .iter()
                .map(|n| PredicateSymbol::new(n.as_ref(), 0))
                .collect(),
            Vec::new(),
        )
    }

    pub fn predicates(&self) -> &[PredicateSymbol] {
        &self.predicates
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateSymbol> {
        self.by_name.get(name).map(|&i| &self.predicates[i])
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    /// Atom id from a predicate name and domain indices of its arguments.
    pub fn atom_id_by_index(
        &self,
        predicate: &str,
        args: &[usize],
    ) -> Result<usize, SemanticsError> {
        let &p = self
            .by_name
            .get(predicate)
            .ok_or_else(|| SemanticsError::UnknownPredicate(predicate.to_string()))?;
        let arity = self.predicates[p].arity;
        if arity != args.len() {
            return Err(SemanticsError::ArityMismatch {
                predicate: predicate.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        let d = self.domain.len();
        let mut local = 0usize;
        for &a in args {
            local = local * d + a;
        }
        Ok(self.offsets[p] + local)
    }

    pub fn atom_id(&self, predicate: &str, args: &[&str]) -> Result<usize, SemanticsError> {
        let idx = args
            .iter()
            .map(|a| {
                self.constant_index(a)
                    .ok_or_else(|| SemanticsError::UnknownConstant(a.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.atom_id_by_index(predicate, &idx)
    }

    pub fn ground_atom(&self, id: usize) -> GroundAtom {
        assert!(id < self.atom_count, "atom id {id} out of range");
        let p = match self.offsets.binary_search(&id) {
            Ok(mut i) => {
                // zero-width predicates (positive arity, empty domain) share offsets
                while self.offset_width(i) == 0 {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        };
        let sym = &self.predicates[p];
        let d = self.domain.len();
        let mut local = id - self.offsets[p];
        let mut args = vec![String::new(); sym.arity];
        for slot in args.iter_mut().rev() {
            *slot = self.domain[local % d].clone();
            local /= d;
        }
        GroundAtom::new(sym.name.clone(), args)
    }

    fn offset_width(&self, p: usize) -> usize {
        let next = self.offsets.get(p + 1).copied().unwrap_or(self.atom_count);
        next - self.offsets[p]
    }

    pub fn ground_atoms(&self) -> Vec<GroundAtom> {
        (0..self.atom_count).map(|i| self.ground_atom(i)).collect()
    }
}

/// Partial map from variables to domain constants.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment(BTreeMap<String, String>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn with(mut self, var: impl Into<String>, constant: impl Into<String>) -> Self {
        self.0.insert(var.into(), constant.into());
        self
    }

    pub fn bind(&mut self, var: impl Into<String>, constant: impl Into<String>) {
        self.0.insert(var.into(), constant.into());
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.0.get(var).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} := {v}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_numbering_round_trips() {
        let sig = Signature::new(
            vec![
                PredicateSymbol::new("p", 0),
                PredicateSymbol::new("q", 1),
                PredicateSymbol::new("r", 2),
            ],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        assert_eq!(sig.atom_count(), 1 + 3 + 9);
        for id in 0..sig.atom_count() {
            let g = sig.ground_atom(id);
            let args: Vec<&str> = g.args.iter().map(String::as_str).collect();
            assert_eq!(sig.atom_id(&g.predicate, &args).unwrap(), id);
        }
        assert_eq!(
            sig.ground_atom(sig.atom_id("r", &["b", "c"]).unwrap())
                .to_string(),
            "r(b, c)"
        );
    }

    #[test]
    fn lookup_errors() {
        let sig = Signature::new(vec![PredicateSymbol::new("q", 1)], vec!["a".into()]).unwrap();
        assert!(matches!(
            sig.atom_id("z", &["a"]),
            Err(SemanticsError::UnknownPredicate(_))
        ));
        assert!(matches!(
            sig.atom_id("q", &[]),
            Err(SemanticsError::ArityMismatch { .. })
        ));
        assert!(matches!(
            sig.atom_id("q", &["b"]),
            Err(SemanticsError::UnknownConstant(_))
        ));
        assert!(Signature::propositional(&["p", "p"]).is_err());
    }

    #[test]
    fn empty_domain_skips_positive_arity() {
        let sig = Signature::new(
            vec![PredicateSymbol::new("q", 1), PredicateSymbol::new("p", 0)],
            vec![],
        )
        .unwrap();
        assert_eq!(sig.atom_count(), 1);
        assert_eq!(sig.ground_atom(0).to_string(), "p");
    }
}
