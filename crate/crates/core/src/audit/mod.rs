//! End-to-end operations behind the command-line tool.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use thiserror::Error;

use crate::dataset::{
    default_bindings, ground_property_with, load_with_config, parse_suite, suite, AuditConfig,
    Bindings, Dataset, DatasetError, GroundOptions, Mode, Property, System,
};
use crate::engine::{
    check_grounded, emit_smtlib, explain, run_solver, EngineError, ExplanationTrace, Status,
    Verdict,
};
use crate::formula::{parse_formula, render_formula, ParseError};
use crate::norms::{
    render_theorem_report, validate_all, NormError, TheoremBounds, ValidationReport,
};
use crate::semantics::{parse_model_file, satisfying_state_names, Assignment, SemanticsError};

/// Printed counterexamples per property unless `--all` is given.
pub const DEFAULT_CAP: usize = 10;

#[derive(Debug, Error)]
pub enum AuditError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("formula: {0}")]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("property {property}: internal verdict {internal}, external solver says {external}")]
    SolverDisagreement {
        property: String,
        internal: Status,
        external: Status,
    },
    #[error("report csv: {0}")]
    ReportCsv(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> AuditError + '_ {
    move |source| AuditError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Dataset, config, bindings and properties for one suite run.
pub struct AuditContext {
    pub system: System,
    pub config: AuditConfig,
    pub dataset: Dataset,
    pub bindings: Bindings,
    pub properties: Vec<Property>,
}

impl AuditContext {
    /// Loads everything; `properties` replaces the built-in suite when given.
    pub fn load(
        data: &Path,
        config: &Path,
        system: System,
        properties: Option<&Path>,
    ) -> Result<Self, AuditError> {
        let config = AuditConfig::load(config)?;
        let dataset = load_with_config(data, &config)?;
        let bindings = default_bindings(system, &config.thresholds, dataset.schema())?
            .with_overrides(&config.bindings, &config.thresholds)?;
        bindings.check_schema(dataset.schema())?;
        let properties = match properties {
            Some(p) => parse_suite(&std::fs::read_to_string(p).map_err(io_err(p))?)?,
            None => suite(system),
        };
        Ok(AuditContext {
            system,
            config,
            dataset,
            bindings,
            properties,
        })
    }

    pub fn property(&self, id: &str) -> Result<&Property, AuditError> {
        self.properties
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| AuditError::UnknownProperty(id.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct AuditRequest {
    pub data: PathBuf,
    pub config: PathBuf,
    pub system: System,
    pub mode: Mode,
    pub properties: Option<PathBuf>,
    /// External solver command for the cross-check (see [`crate::engine::SOLVER_ENV`]).
    pub solver: Option<String>,
}

#[derive(Debug, Clone)]
pub struct AuditEntry {
    pub id: String,
    pub formula: String,
    pub verdict: Verdict,
    pub warnings: Vec<String>,
    pub explanation: Option<ExplanationTrace>,
    pub external: Option<Status>,
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub suite: String,
    pub mode: Mode,
    pub rows: usize,
    pub skipped_rows: usize,
    pub config_echo: String,
    pub entries: Vec<AuditEntry>,
    pub solver: Option<String>,
}

fn conventions(s: Status) -> &'static str {
    match s {
        Status::Satisfied => "property asserted: sat; negation asserted: unsat",
        Status::Unsatisfied => "property asserted: unsat; negation asserted: sat",
    }
}

impl AuditReport {
    /// "Ethical per suite" iff every property is satisfied.
    pub fn ethical(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.verdict.status == Status::Satisfied)
    }

    pub fn exit_code(&self) -> i32 {
        if self.ethical() {
            0
        } else {
            1
        }
    }

    pub fn statuses(&self) -> Vec<(String, Status)> {
        self.entries
            .iter()
            .map(|e| (e.id.clone(), e.verdict.status))
            .collect()
    }

    /// Human-readable report. Contains no timings, so equal inputs give equal bytes.
    pub fn to_text(&self, cap: Option<usize>) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "audit suite={} mode={} rows={} skipped_rows={}",
            self.suite, self.mode, self.rows, self.skipped_rows
        );
        let _ = writeln!(s, "config: {}", self.config_echo);
        for e in &self.entries {
            let v = &e.verdict;
            let _ = writeln!(s);
            let _ = writeln!(s, "{}: {}  {}", e.id, v.status, e.formula);
            let _ = writeln!(s, "   ({})", conventions(v.status));
            let _ = writeln!(
                s,
                "   checked {} row instance(s), {} pair instance(s)",
                v.stats.rows_checked, v.stats.pairs_checked
            );
            if v.vacuous {
                let _ = writeln!(s, "   warning: holds vacuously, every row was skipped");
            }
            for w in &e.warnings {
                let _ = writeln!(s, "   warning: {w}");
            }
            let shown = cap.unwrap_or(usize::MAX).min(v.counterexamples.len());
            for cx in &v.counterexamples[..shown] {
                let vals: Vec<String> = cx
                    .valuation
                    .iter()
                    .map(|(a, b)| format!("{a}={b}"))
                    .collect();
                let _ = writeln!(
                    s,
                    "   counterexample [{}]: {}  {{{}}}",
                    cx.rows.join(","),
                    cx.clause,
                    vals.join(", ")
                );
            }
            if shown < v.counterexamples.len() {
                let _ = writeln!(
                    s,
                    "   ... {} more counterexample(s) (use --all)",
                    v.counterexamples.len() - shown
                );
            }
            if let Some(t) = &e.explanation {
                let _ = writeln!(s, "   explanation:");
                for (i, step) in t.steps.iter().enumerate() {
                    let _ = writeln!(s, "     {}. [{}] {}", i + 1, step.rule, step.statement);
                }
            }
            if let Some(x) = e.external {
                let _ = writeln!(s, "   external solver: {x}");
            }
        }
        let _ = writeln!(s);
        let unsat = self
            .entries
            .iter()
            .filter(|e| e.verdict.status == Status::Unsatisfied)
            .count();
        if unsat == 0 {
            let _ = writeln!(
                s,
                "overall: ethical per suite ({} properties satisfied)",
                self.entries.len()
            );
        } else {
            let _ = writeln!(
                s,
                "overall: not ethical per suite ({unsat} of {} properties unsatisfied)",
                self.entries.len()
            );
        }
        s
    }

    /// CSV with columns `property,status,counterexamples,elapsed_ms`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let _ = w.write_record(["property", "status", "counterexamples", "elapsed_ms"]);
        for e in &self.entries {
            let _ = w.write_record([
                e.id.clone(),
                e.verdict.status.to_string(),
                e.verdict.counterexamples.len().to_string(),
                format!("{:.3}", e.verdict.stats.elapsed.as_secs_f64() * 1000.0),
            ]);
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }
}

/// Rows of a report CSV: (property, status, counterexample count, elapsed).
pub fn parse_report_csv(text: &str) -> Result<Vec<(String, Status, usize, Duration)>, AuditError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r
        .headers()
        .map_err(|e| AuditError::ReportCsv(e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["property", "status", "counterexamples", "elapsed_ms"]
    {
        return Err(AuditError::ReportCsv(format!(
            "unexpected header {headers:?}"
        )));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| AuditError::ReportCsv(e.to_string()))?;
        let status = rec[1].parse().map_err(AuditError::ReportCsv)?;
        let count = rec[2]
            .parse()
            .map_err(|_| AuditError::ReportCsv(format!("bad count `{}`", &rec[2])))?;
        let ms: f64 = rec[3]
            .parse()
            .map_err(|_| AuditError::ReportCsv(format!("bad time `{}`", &rec[3])))?;
        out.push((
            rec[0].to_string(),
            status,
            count,
            Duration::from_secs_f64(ms / 1000.0),
        ));
    }
    Ok(out)
}

/// Grounds and checks every property of the suite, in suite order.
pub fn run_audit(req: &AuditRequest) -> Result<AuditReport, AuditError> {
    let ctx = AuditContext::load(
        &req.data,
        &req.config,
        req.system,
        req.properties.as_deref(),
    )?;
    audit_context(&ctx, req.mode, req.solver.as_deref())
}

pub fn audit_context(
    ctx: &AuditContext,
    mode: Mode,
    solver: Option<&str>,
) -> Result<AuditReport, AuditError> {
    let opts = GroundOptions {
        mode,
        ..GroundOptions::default()
    };
    let mut entries = Vec::new();
    let mut skipped: BTreeSet<String> = BTreeSet::new();
    for p in &ctx.properties {
        let g = ground_property_with(&p.id, &p.formula, &ctx.dataset, &ctx.bindings, opts)?;
        skipped.extend(g.skipped.iter().map(|s| s.id.clone()));
        let verdict = check_grounded(&g);
        let explanation = match verdict.status {
            Status::Unsatisfied => Some(explain(&verdict, &g)?),
            Status::Satisfied => None,
        };
        let external = match solver {
            Some(cmd) => {
                let answer = run_solver(cmd, &emit_smtlib(&g))?;
                let ext = answer.verdict_status();
                if ext != verdict.status {
                    return Err(AuditError::SolverDisagreement {
                        property: p.id.clone(),
                        internal: verdict.status,
                        external: ext,
                    });
                }
                Some(ext)
            }
            None => None,
        };
        entries.push(AuditEntry {
            id: p.id.clone(),
            formula: render_formula(&p.formula),
            verdict,
            warnings: g.warnings.clone(),
            explanation,
            external,
        });
    }
    Ok(AuditReport {
        suite: ctx.system.to_string(),
        mode,
        rows: ctx.dataset.len(),
        skipped_rows: skipped.len(),
        config_echo: ctx.config.echo(),
        entries,
        solver: solver.map(String::from),
    })
}

/// SMT-LIB for one property; written to `out` when given.
pub fn run_emit(
    data: &Path,
    config: &Path,
    system: System,
    property: &str,
    mode: Mode,
    out: Option<&Path>,
) -> Result<String, AuditError> {
    let ctx = AuditContext::load(data, config, system, None)?;
    let p = ctx.property(property)?;
    let opts = GroundOptions {
        mode,
        ..GroundOptions::default()
    };
    let g = ground_property_with(&p.id, &p.formula, &ctx.dataset, &ctx.bindings, opts)?;
    let text = emit_smtlib(&g);
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(io_err(path))?;
    }
    Ok(text)
}

/// Checks every theorem; writes `theorems.report` contents to `out` when given.
pub fn run_theorems(
    bounds: TheoremBounds,
    out: Option<&Path>,
) -> Result<(Vec<ValidationReport>, String), AuditError> {
    let reports = validate_all(bounds)?;
    let text = render_theorem_report(&reports);
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(io_err(path))?;
    }
    Ok((reports, text))
}

/// Evaluates a closed formula on every state of a model file.
pub fn run_check(model: &Path, formula: &str) -> Result<String, AuditError> {
    let f = parse_formula(formula)?;
    let text = std::fs::read_to_string(model).map_err(io_err(model))?;
    let extra: Vec<_> = f.predicate_symbols().into_iter().collect();
    let m = parse_model_file(&text, &extra)?;
    let sigma = Assignment::new();
    let holding = satisfying_state_names(&m, &sigma, &f)?;
    let mut s = String::new();
    let _ = writeln!(s, "formula: {}", render_formula(&f));
    for i in 0..m.num_states() {
        let name = m.state_name(i);
        let _ = writeln!(s, "{name}: {}", holding.iter().any(|h| h == name));
    }
    Ok(s)
}
