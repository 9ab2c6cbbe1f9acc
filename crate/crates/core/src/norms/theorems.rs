use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::formula::{parse_formula, render_formula, Formula, PredicateSymbol};
use crate::semantics::{
    check_validity_at, find_model, CheckAt, Counterexample, ModelBounds, Signature, ValidityOutcome,
};

use super::axioms::axiom;
use super::vocabulary::{ethics_vocabulary, DOMAIN_CONSTANT};
use super::NormError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedStatus {
    ValidUpToBounds,
    Refutable,
    Unknown,
}

/// Where a premise is asserted on the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Wrapped in `[]` and asserted at `s0`, i.e. at every state.
    Global,
    /// Asserted at `s0` only.
    Initial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PremiseSource {
    Axiom(&'static str),
    /// An extra assumption taken from a proof step; listed explicitly in every report.
    Assumption,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Premise {
    pub source: PremiseSource,
    pub formula: Formula,
    pub placement: Placement,
}

impl Premise {
    /// Label used in reports: the axiom id, or the quoted assumption text.
    pub fn label(&self) -> String {
        match self.source {
            PremiseSource::Axiom(id) => id.to_string(),
            PremiseSource::Assumption => format!("\"{}\"", render_formula(&self.formula)),
        }
    }

    /// The formula actually checked at the initial state.
    pub fn asserted(&self) -> Formula {
        match self.placement {
            Placement::Global => Formula::always(self.formula.clone()),
            Placement::Initial => self.formula.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremSpec {
    pub id: &'static str,
    pub premises: Vec<Premise>,
    pub conclusion: Formula,
    pub expected_status: ExpectedStatus,
}

impl TheoremSpec {
    /// Vocabulary symbols used by premises and conclusion, in vocabulary order.
    pub fn symbols(&self) -> Vec<PredicateSymbol> {
        let mut used: BTreeSet<PredicateSymbol> = self.conclusion.predicate_symbols();
        for p in &self.premises {
            used.extend(p.formula.predicate_symbols());
        }
        ethics_vocabulary()
            .into_iter()
            .filter(|s| used.contains(s))
            .collect()
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.symbols(), vec![DOMAIN_CONSTANT.to_string()])
            .expect("vocabulary is well formed")
    }

    pub fn atom_count(&self) -> usize {
        self.signature().atom_count()
    }
}

fn default_placement(f: &Formula) -> Placement {
    if f.has_temporal() {
        Placement::Initial
    } else {
        Placement::Global
    }
}

fn ax(id: &'static str) -> Premise {
    let schema = axiom(id).expect("built-in axiom id");
    let formula = schema.closed();
    Premise {
        source: PremiseSource::Axiom(id),
        placement: default_placement(&formula),
        formula,
    }
}

fn assume(src: &str) -> Premise {
    let formula = parse_formula(src).expect("built-in assumption parses");
    Premise {
        source: PremiseSource::Assumption,
        placement: default_placement(&formula),
        formula,
    }
}

fn spec(
    id: &'static str,
    premises: Vec<Premise>,
    conclusion: &str,
    expected_status: ExpectedStatus,
) -> TheoremSpec {
    TheoremSpec {
        id,
        premises,
        conclusion: parse_formula(conclusion).expect("built-in conclusion parses"),
        expected_status,
    }
}

pub const THEOREM_IDS: [&str; 8] = ["T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8"];

pub fn theorem_spec(id: &str) -> Result<TheoremSpec, NormError> {
    use ExpectedStatus::*;
    Ok(match id {
        "T1" => spec(
            "T1",
            vec![ax("A1.4")],
            "O(performs(x,a) & ethical_action(a)) -> O(performs(x,a) & guidelines(x))",
            Unknown,
        ),
        "T2" => spec(
            "T2",
            vec![],
            "O(performs(x,a) & ethical_action(a)) -> !P(!(performs(x,a) & ethical_action(a)))",
            ValidUpToBounds,
        ),
        "T3" => spec(
            "T3",
            vec![ax("A2.2"), ax("A2.5")],
            "<>(!fair(x)) -> <>(!ethical(x))",
            ValidUpToBounds,
        ),
        "T4" => spec(
            "T4",
            vec![ax("A2.1"), ax("A2.2"), ax("A2.5")],
            "ethical(x) -> ([](fair(x)) | (<>(fair(x)) & [](!fair(x) U fair(x))))",
            Unknown,
        ),
        "T5" => spec(
            "T5",
            vec![ax("A2.1"), assume("learns(x) -> <>(fair(x))")],
            "ethical(x) & learns(x) -> [](<>(fair_train(x)) & <>(fair_deploy(x)))",
            Unknown,
        ),
        "T6" => spec(
            "T6",
            vec![
                ax("A2.2"),
                assume("<>(ethical(x))"),
                assume("<>(!bias_deploy(x)) -> bm(x)"),
                assume("bm(x) -> <>([](!bias_deploy(x)))"),
            ],
            "bias_train(x) & learns(x) -> <>(!bias_deploy(x) & [](!bias_deploy(x)))",
            Unknown,
        ),
        "T7" => spec(
            "T7",
            vec![
                ax("A3.1"),
                ax("A3.3"),
                assume("transparent(x) -> (inherent_xai(x) | retrofit_xai(x))"),
            ],
            "ethical(x) -> <>(inherent_xai(x) | retrofit_xai(x))",
            Unknown,
        ),
        "T8" => spec(
            "T8",
            vec![
                ax("A3.2"),
                assume("ethical(x) -> !bias(x)"),
                assume("[](!bias(x)) -> <>(ethical(x))"),
            ],
            "<>([](cf(x,c))) -> <>(ethical(x))",
            Unknown,
        ),
        other => return Err(NormError::UnknownTheorem(other.to_string())),
    })
}

pub fn theorem_specs() -> Vec<TheoremSpec> {
    THEOREM_IDS
        .iter()
        .map(|id| theorem_spec(id).expect("built-in theorem id"))
        .collect()
}

/// Bounds for theorem checking. Every theorem is checked on traces over a one-element domain,
/// using only the atoms it mentions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremBounds {
    pub max_states: usize,
    pub max_atoms: usize,
}

impl Default for TheoremBounds {
    fn default() -> Self {
        TheoremBounds {
            max_states: 3,
            max_atoms: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoremStatus {
    ValidUpToBounds,
    Counterexample(Box<Counterexample>),
    /// The theorem needs more ground atoms than the bound allows.
    Skipped {
        atoms: usize,
    },
}

impl TheoremStatus {
    pub fn keyword(&self) -> &'static str {
        match self {
            TheoremStatus::ValidUpToBounds => "valid",
            TheoremStatus::Counterexample(_) => "refuted",
            TheoremStatus::Skipped { .. } => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub id: &'static str,
    pub premises: Vec<String>,
    pub status: TheoremStatus,
    pub models_checked: u64,
    pub bounds: TheoremBounds,
    /// For T5 only: whether training-only fairness is satisfiable in the same model class.
    pub a24_satisfiable: Option<bool>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} premises=[{}] {} models={}",
            self.id,
            self.premises.join(", "),
            self.status.keyword(),
            self.models_checked
        )?;
        match &self.status {
            TheoremStatus::Counterexample(c) => write!(
                f,
                " states={} state={}",
                c.model.num_states(),
                c.model.state_name(c.state)
            )?,
            TheoremStatus::Skipped { atoms } => {
                write!(f, " atoms={atoms} max_atoms={}", self.bounds.max_atoms)?
            }
            TheoremStatus::ValidUpToBounds => {}
        }
        if let Some(sat) = self.a24_satisfiable {
            write!(
                f,
                " A2.4={}",
                if sat { "satisfiable" } else { "unsatisfiable" }
            )?;
        }
        Ok(())
    }
}

fn trace_bounds(sig: Signature, max_states: usize) -> ModelBounds {
    ModelBounds::up_to(Arc::new(sig), max_states, true)
}

/// Checks the "not necessarily" reading of A2.4: some bounded trace reaches a state fair in
/// training but not in deployment.
pub fn check_a24(bounds: TheoremBounds) -> Result<bool, NormError> {
    let f = parse_formula("<>(fair_train(x) & !fair_deploy(x))").expect("parses");
    let sig = Signature::new(
        f.predicate_symbols().into_iter().collect(),
        vec![DOMAIN_CONSTANT.to_string()],
    )?;
    let (found, _) = find_model(
        &f,
        &trace_bounds(sig, bounds.max_states),
        CheckAt::InitialState,
    )?;
    Ok(found.is_some())
}

/// Checks one theorem: every trace within the bounds whose initial state satisfies the premises
/// must satisfy the conclusion there.
pub fn validate_spec(
    spec: &TheoremSpec,
    bounds: TheoremBounds,
) -> Result<ValidationReport, NormError> {
    let premises = spec.premises.iter().map(Premise::label).collect();
    let a24_satisfiable = if spec.id == "T5" {
        Some(check_a24(bounds)?)
    } else {
        None
    };
    let sig = spec.signature();
    let atoms = sig.atom_count();
    if atoms > bounds.max_atoms {
        return Ok(ValidationReport {
            id: spec.id,
            premises,
            status: TheoremStatus::Skipped { atoms },
            models_checked: 0,
            bounds,
            a24_satisfiable,
        });
    }
    let asserted: Vec<Formula> = spec.premises.iter().map(Premise::asserted).collect();
    let outcome = check_validity_at(
        &asserted,
        &spec.conclusion,
        &trace_bounds(sig, bounds.max_states),
        CheckAt::InitialState,
    )?;
    let models_checked = outcome.models_checked();
    let status = match outcome {
        ValidityOutcome::ValidUpToBounds { .. } => TheoremStatus::ValidUpToBounds,
        ValidityOutcome::Counterexample(c) => TheoremStatus::Counterexample(c),
    };
    Ok(ValidationReport {
        id: spec.id,
        premises,
        status,
        models_checked,
        bounds,
        a24_satisfiable,
    })
}

pub fn validate_theorem(id: &str, bounds: TheoremBounds) -> Result<ValidationReport, NormError> {
    validate_spec(&theorem_spec(id)?, bounds)
}

pub fn validate_all(bounds: TheoremBounds) -> Result<Vec<ValidationReport>, NormError> {
    THEOREM_IDS
        .iter()
        .map(|id| validate_theorem(id, bounds))
        .collect()
}

/// `theorems.report` contents: one line per theorem.
pub fn render_theorem_report(reports: &[ValidationReport]) -> String {
    reports.iter().map(|r| format!("{r}\n")).collect()
}
