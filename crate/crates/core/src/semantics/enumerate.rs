use std::ops::ControlFlow;
use std::sync::Arc;

use super::{KripkeModel, SemanticsError, Signature};

/// Enumeration refuses model classes larger than `2^MAX_MODELS_LOG2`.
pub const MAX_MODELS_LOG2: u32 = 40;

/// Size limits for exhaustive model enumeration.
#[derive(Debug, Clone)]
pub struct ModelBounds {
    pub min_states: usize,
    pub max_states: usize,
    pub signature: Arc<Signature>,
    /// Fix the temporal relation to the successor chain instead of enumerating it.
    pub trace_only: bool,
}

impl ModelBounds {
    /// Models with exactly `states` states.
    pub fn exact(signature: Arc<Signature>, states: usize, trace_only: bool) -> Self {
        ModelBounds {
            min_states: states,
            max_states: states,
            signature,
            trace_only,
        }
    }

    /// Models with `1..=max_states` states.
    pub fn up_to(signature: Arc<Signature>, max_states: usize, trace_only: bool) -> Self {
        ModelBounds {
            min_states: 1,
            max_states,
            signature,
            trace_only,
        }
    }

    fn log2_count(&self, n: usize) -> usize {
        let atoms = self.signature.atom_count();
        let relations = if self.trace_only { 1 } else { 2 };
        n * atoms + relations * n * n
    }

    /// Closed-form size of the model class: the sum over `n` of
    /// `2^(n*atoms) * 2^(n*n)` (traces) or `2^(n*atoms) * 2^(2*n*n)` (general models).
    pub fn model_count(&self) -> Result<u64, SemanticsError> {
        if self.min_states == 0 || self.min_states > self.max_states {
            return Err(SemanticsError::InvalidBounds(format!(
                "state range {}..={} is empty or starts at zero",
                self.min_states, self.max_states
            )));
        }
        let mut total: u64 = 0;
        for n in self.min_states..=self.max_states {
            let e = self.log2_count(n);
            if e > MAX_MODELS_LOG2 as usize {
                return Err(SemanticsError::BoundOverflow {
                    states: n,
                    log2_models: e,
                });
            }
            total += 1u64 << e;
        }
        if total > 1u64 << MAX_MODELS_LOG2 {
            return Err(SemanticsError::BoundOverflow {
                states: self.max_states,
                log2_models: 64 - total.leading_zeros() as usize,
            });
        }
        Ok(total)
    }
}

/// Visits every model within `bounds` exactly once, reusing one model buffer.
/// Order: state count, then temporal relation, then deontic relation, then valuation.
/// Returns the number of models visited (stops early on `ControlFlow::Break`).
pub fn for_each_model(
    bounds: &ModelBounds,
    mut visit: impl FnMut(&KripkeModel) -> ControlFlow<()>,
) -> Result<u64, SemanticsError> {
    bounds.model_count()?;
    let atoms = bounds.signature.atom_count();
    let mut visited = 0u64;
    for n in bounds.min_states..=bounds.max_states {
        let mut m = KripkeModel::new(bounds.signature.clone(), n)?;
        let rel_bits = n * n;
        let temporal_choices: u64 = if bounds.trace_only { 1 } else { 1 << rel_bits };
        let val_choices: u64 = 1 << (n * atoms);
        for rt in 0..temporal_choices {
            for ro in 0..(1u64 << rel_bits) {
                if bounds.trace_only {
                    m.set_chain();
                    m.set_relations_packed(None, ro);
                } else {
                    m.set_relations_packed(Some(rt), ro);
                }
                for val in 0..val_choices {
                    m.valuation.load_packed(n, atoms, val);
                    visited += 1;
                    if visit(&m).is_break() {
                        return Ok(visited);
                    }
                }
            }
        }
    }
    Ok(visited)
}

/// Owning iterator over the same sequence as [`for_each_model`].
pub struct ModelEnumerator {
    bounds: ModelBounds,
    current: Option<KripkeModel>,
    n: usize,
    rt: u64,
    ro: u64,
    val: u64,
}

impl ModelEnumerator {
    pub fn new(bounds: ModelBounds) -> Result<Self, SemanticsError> {
        bounds.model_count()?;
        let n = bounds.min_states;
        Ok(ModelEnumerator {
            current: Some(KripkeModel::new(bounds.signature.clone(), n)?),
            bounds,
            n,
            rt: 0,
            ro: 0,
            val: 0,
        })
    }
}

impl Iterator for ModelEnumerator {
    type Item = KripkeModel;

    fn next(&mut self) -> Option<KripkeModel> {
        let atoms = self.bounds.signature.atom_count();
        loop {
            let n = self.n;
            if n > self.bounds.max_states {
                return None;
            }
            let rel_bits = n * n;
            let temporal_choices: u64 = if self.bounds.trace_only {
                1
            } else {
                1 << rel_bits
            };
            if self.val >= 1u64 << (n * atoms) {
                self.val = 0;
                self.ro += 1;
            }
            if self.ro >= 1u64 << rel_bits {
                self.ro = 0;
                self.rt += 1;
            }
            if self.rt >= temporal_choices {
                self.rt = 0;
                self.n += 1;
                if self.n <= self.bounds.max_states {
                    self.current = KripkeModel::new(self.bounds.signature.clone(), self.n).ok();
                }
                continue;
            }
            let m = self.current.as_mut()?;
            if self.bounds.trace_only {
                m.set_chain();
                m.set_relations_packed(None, self.ro);
            } else {
                m.set_relations_packed(Some(self.rt), self.ro);
            }
            m.valuation.load_packed(n, atoms, self.val);
            self.val += 1;
            return Some(m.clone());
        }
    }
}

/// Stream of every model within `bounds`.
pub fn enumerate_models(bounds: ModelBounds) -> Result<ModelEnumerator, SemanticsError> {
    ModelEnumerator::new(bounds)
}
