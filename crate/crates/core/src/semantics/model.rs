use std::sync::Arc;

use super::{SemanticsError, Signature};

/// Upper bound on states in a [`KripkeModel`]; state sets are single-word bitmasks.
pub const MAX_STATES: usize = 64;

fn words_for(atoms: usize) -> usize {
    atoms.div_ceil(64).max(1)
}

/// Per-state truth assignment of every ground atom, stored as packed bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Valuation {
    words: usize,
    bits: Vec<u64>,
}

impl Valuation {
    pub(crate) fn new(states: usize, atoms: usize) -> Self {
        let words = words_for(atoms);
        Valuation {
            words,
            bits: vec![0; states * words],
        }
    }

    #[inline]
    pub(crate) fn get(&self, state: usize, atom: usize) -> bool {
        (self.bits[state * self.words + atom / 64] >> (atom % 64)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, state: usize, atom: usize, value: bool) {
        let w = &mut self.bits[state * self.words + atom / 64];
        if value {
            *w |= 1 << (atom % 64);
        } else {
            *w &= !(1 << (atom % 64));
        }
    }

    fn resize(&mut self, states: usize) {
        self.bits.resize(states * self.words, 0);
    }

    /// Loads `atoms` bits per state from a packed integer, state 0 in the low bits.
    pub(crate) fn load_packed(&mut self, states: usize, atoms: usize, packed: u64) {
        debug_assert!(atoms <= 64 && self.words == 1);
        let mask = if atoms == 64 {
            u64::MAX
        } else {
            (1u64 << atoms) - 1
        };
        for s in 0..states {
            self.bits[s] = (packed >> (s * atoms)) & mask;
        }
    }
}

/// Finite model with temporal and deontic accessibility relations over at most
/// [`MAX_STATES`] states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    signature: Arc<Signature>,
    names: Vec<String>,
    pub(crate) temporal: Vec<u64>,
    pub(crate) deontic: Vec<u64>,
    pub(crate) valuation: Valuation,
}

impl KripkeModel {
    /// `states` states named `s0..`, no edges, every atom false.
    pub fn new(signature: Arc<Signature>, states: usize) -> Result<Self, SemanticsError> {
        let names = (0..states).map(|i| format!("s{i}")).collect();
        KripkeModel::with_names(signature, names)
    }

    pub fn with_names(
        signature: Arc<Signature>,
        names: Vec<String>,
    ) -> Result<Self, SemanticsError> {
        let n = names.len();
        if n == 0 {
            return Err(SemanticsError::NoStates);
        }
        if n > MAX_STATES {
            return Err(SemanticsError::TooManyStates(n));
        }
        let valuation = Valuation::new(n, signature.atom_count());
        Ok(KripkeModel {
            signature,
            names,
            temporal: vec![0; n],
            deontic: vec![0; n],
            valuation,
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub(crate) fn all_states(&self) -> u64 {
        let n = self.num_states();
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    fn check_state(&self, s: usize) -> Result<(), SemanticsError> {
        if s < self.num_states() {
            Ok(())
        } else {
            Err(SemanticsError::StateOutOfRange {
                index: s,
                len: self.num_states(),
            })
        }
    }

    pub fn add_temporal_edge(&mut self, from: usize, to: usize) -> Result<(), SemanticsError> {
        self.check_state(from)?;
        self.check_state(to)?;
        self.temporal[from] |= 1 << to;
        Ok(())
    }

    pub fn add_deontic_edge(&mut self, from: usize, to: usize) -> Result<(), SemanticsError> {
        self.check_state(from)?;
        self.check_state(to)?;
        self.deontic[from] |= 1 << to;
        Ok(())
    }

    pub fn set_atom(
        &mut self,
        state: usize,
        atom: usize,
        value: bool,
    ) -> Result<(), SemanticsError> {
        self.check_state(state)?;
        if atom >= self.signature.atom_count() {
            return Err(SemanticsError::UnknownAtomId(atom));
        }
        self.valuation.set(state, atom, value);
        Ok(())
    }

    /// Sets a ground atom by name, e.g. `set("p", &["a"], 0, true)`.
    pub fn set(
        &mut self,
        predicate: &str,
        args: &[&str],
        state: usize,
        value: bool,
    ) -> Result<(), SemanticsError> {
        let id = self.signature.atom_id(predicate, args)?;
        self.set_atom(state, id, value)
    }

    pub fn holds(&self, state: usize, atom: usize) -> bool {
        self.valuation.get(state, atom)
    }

    pub fn temporal_successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.temporal[s])
    }

    pub fn deontic_successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.deontic[s])
    }

    /// Reflexive-transitive closure of the temporal relation, one mask per state.
    pub(crate) fn temporal_reach(&self) -> Vec<u64> {
        let n = self.num_states();
        let mut reach: Vec<u64> = (0..n).map(|s| self.temporal[s] | (1 << s)).collect();
        loop {
            let mut changed = false;
            for s in 0..n {
                let mut r = reach[s];
                for t in bits(reach[s]) {
                    r |= reach[t];
                }
                if r != reach[s] {
                    reach[s] = r;
                    changed = true;
                }
            }
            if !changed {
                return reach;
            }
        }
    }

    /// True when the temporal relation is exactly the successor chain `s0 -> s1 -> ...`.
    pub fn is_chain(&self) -> bool {
        let n = self.num_states();
        (0..n).all(|s| {
            let expected = if s + 1 < n { 1u64 << (s + 1) } else { 0 };
            self.temporal[s] == expected
        })
    }

    /// The linear trace this model encodes, if the temporal relation is a chain.
    pub fn to_trace(&self) -> Option<TraceModel> {
        if !self.is_chain() {
            return None;
        }
        let n = self.num_states();
        let mut t = TraceModel::new(self.signature.clone(), n).ok()?;
        for s in 0..n {
            t.deontic[s] = bits(self.deontic[s]).collect();
        }
        t.valuation = self.valuation.clone();
        Some(t)
    }

    pub(crate) fn set_relations_packed(&mut self, temporal: Option<u64>, deontic: u64) {
        let n = self.num_states();
        let row = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for s in 0..n {
            if let Some(rt) = temporal {
                self.temporal[s] = (rt >> (s * n)) & row;
            }
            self.deontic[s] = (deontic >> (s * n)) & row;
        }
    }

    pub(crate) fn set_chain(&mut self) {
        let n = self.num_states();
        for s in 0..n {
            self.temporal[s] = if s + 1 < n { 1 << (s + 1) } else { 0 };
        }
    }
}

pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Finite linear trace `s0 .. s(n-1)` with per-state deontic successor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceModel {
    signature: Arc<Signature>,
    pub(crate) deontic: Vec<Vec<usize>>,
    pub(crate) valuation: Valuation,
}

impl TraceModel {
    pub fn new(signature: Arc<Signature>, len: usize) -> Result<Self, SemanticsError> {
        if len == 0 {
            return Err(SemanticsError::NoStates);
        }
        let valuation = Valuation::new(len, signature.atom_count());
        Ok(TraceModel {
            signature,
            deontic: vec![Vec::new(); len],
            valuation,
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn len(&self) -> usize {
        self.deontic.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deontic.is_empty()
    }

    /// Appends a state with no deontic successors and every atom false.
    pub fn push_state(&mut self) -> usize {
        self.deontic.push(Vec::new());
        self.valuation.resize(self.deontic.len());
        self.deontic.len() - 1
    }

    fn check_state(&self, s: usize) -> Result<(), SemanticsError> {
        if s < self.len() {
            Ok(())
        } else {
            Err(SemanticsError::StateOutOfRange {
                index: s,
                len: self.len(),
            })
        }
    }

    pub fn set_deontic_successors(
        &mut self,
        state: usize,
        succ: Vec<usize>,
    ) -> Result<(), SemanticsError> {
        self.check_state(state)?;
        for &t in &succ {
            self.check_state(t)?;
        }
        self.deontic[state] = succ;
        Ok(())
    }

    pub fn deontic_successors(&self, state: usize) -> &[usize] {
        &self.deontic[state]
    }

    pub fn set_atom(
        &mut self,
        state: usize,
        atom: usize,
        value: bool,
    ) -> Result<(), SemanticsError> {
        self.check_state(state)?;
        if atom >= self.signature.atom_count() {
            return Err(SemanticsError::UnknownAtomId(atom));
        }
        self.valuation.set(state, atom, value);
        Ok(())
    }

    pub fn set(
        &mut self,
        predicate: &str,
        args: &[&str],
        state: usize,
        value: bool,
    ) -> Result<(), SemanticsError> {
        let id = self.signature.atom_id(predicate, args)?;
        self.set_atom(state, id, value)
    }

    pub fn holds(&self, state: usize, atom: usize) -> bool {
        self.valuation.get(state, atom)
    }

    /// The general model with the successor chain as temporal relation.
    pub fn to_kripke(&self) -> Result<KripkeModel, SemanticsError> {
        let mut m = KripkeModel::new(self.signature.clone(), self.len())?;
        m.set_chain();
        for (s, succ) in self.deontic.iter().enumerate() {
            for &t in succ {
                m.add_deontic_edge(s, t)?;
            }
        }
        m.valuation = self.valuation.clone();
        Ok(m)
    }
}
