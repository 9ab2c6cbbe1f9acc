//! Tabular datasets, predicate bindings, suites, and grounding of suite properties.

mod bindings;
mod config;
mod grounding;
mod suites;
mod table;

use std::path::Path;

use thiserror::Error;

pub use bindings::{
    default_bindings, parse_rule, similar, Bindings, CmpOp, Literal, PredicateBinding, Rule, System,
};
pub use config::{AuditConfig, ThresholdConfig};
pub use grounding::{
    ground_property, ground_property_with, induced_model, usable_rows, GroundOptions, GroundedAtom,
    GroundedProperty, Instance, Mode, Node, PairIndex, Quantified, SkippedRow, PAIR_INDEX_ROWS,
};
pub use suites::{compas_suite, loan_suite, parse_suite, suite, Property};
pub use table::{load_csv, ColumnType, Dataset, Schema, Value};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("row {row}, column `{column}`: expected {expected}, found `{found}`")]
    Coercion {
        row: usize,
        column: String,
        expected: ColumnType,
        found: String,
    },
    #[error("row {row} has no id")]
    MissingId { row: usize },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("dataset must contain at least one row")]
    NoRows,
    #[error("config: {0}")]
    Config(String),
    #[error("cannot parse rule `{0}`")]
    BadRule(String),
    #[error("binding `{symbol}` reads column `{column}`, which is not in the schema")]
    UnknownBindingColumn { symbol: String, column: String },
    #[error("no binding for predicate `{0}`")]
    MissingBinding(String),
    #[error("predicate `{predicate}` is bound with arity {expected}, used with {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown row id `{0}`")]
    UnknownRow(String),
    #[error("`similar` needs two different rows, got `{0}` twice")]
    SameRow(String),
    #[error("unknown suite `{0}` (expected compas or loan)")]
    UnknownSuite(String),
    #[error("unknown mode `{0}` (expected reproduction or strict)")]
    UnknownMode(String),
    #[error("suite: {0}")]
    Suite(String),
    #[error("property {0} uses deontic operators, which strict mode cannot ground")]
    DeonticInStrictMode(String),
    #[error("induced model: {0}")]
    Model(String),
}

/// Loads a CSV using the config's id column and declared column types.
pub fn load_with_config(
    path: impl AsRef<Path>,
    cfg: &AuditConfig,
) -> Result<Dataset, DatasetError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| DatasetError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let header: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    let records = rdr
        .records()
        .map(|r| r.map(|rec| rec.iter().map(String::from).collect()))
        .collect::<Result<Vec<Vec<String>>, _>>()?;
    let schema = cfg.schema_for(&header, &records);
    Dataset::from_records(&schema, &header, &records, &cfg.id_column)
}
