//! Audit configuration (TOML).
//!
//! ```toml
//! id_column = "id"              # default "id"
//!
//! [thresholds]
//! decile = 5                    # default 5
//! credit = 650.0                # required for the loan suite
//! income = 50000.0              # required for the loan suite
//!
//! [columns.sensitive]
//! names = ["race", "gender", "age"]
//!
//! [columns.nonsensitive]
//! names = ["priors_count", "decile_score"]
//!
//! [schema]                      # optional; inferred from the data otherwise
//! priors_count = "integer"
//!
//! [bindings]                    # optional rule overrides, see `parse_rule`
//! assess = "decile_score >= 6"
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use super::{ColumnType, DatasetError, Schema};

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdConfig {
    pub decile_threshold: i64,
    pub credit_threshold: Option<f64>,
    pub income_threshold: Option<f64>,
    pub sensitive_columns: Vec<String>,
    pub nonsensitive_columns: Vec<String>,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            decile_threshold: 5,
            credit_threshold: None,
            income_threshold: None,
            sensitive_columns: Vec::new(),
            nonsensitive_columns: Vec::new(),
        }
    }
}

impl ThresholdConfig {
    pub fn validate(&self) -> Result<(), DatasetError> {
        let sens: BTreeSet<&String> = self.sensitive_columns.iter().collect();
        if let Some(c) = self.nonsensitive_columns.iter().find(|c| sens.contains(c)) {
            return Err(DatasetError::Config(format!(
                "column `{c}` is listed as both sensitive and nonsensitive"
            )));
        }
        for (name, t) in [
            ("credit", self.credit_threshold),
            ("income", self.income_threshold),
        ] {
            if t.is_some_and(|t| !t.is_finite()) {
                return Err(DatasetError::Config(format!(
                    "{name} threshold must be finite"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditConfig {
    pub id_column: String,
    pub thresholds: ThresholdConfig,
    pub schema: Option<BTreeMap<String, ColumnType>>,
    /// Predicate name to rule text; replaces the default binding of that name.
    pub bindings: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default = "default_id")]
    id_column: String,
    #[serde(default)]
    thresholds: RawThresholds,
    #[serde(default)]
    columns: RawColumns,
    schema: Option<BTreeMap<String, ColumnType>>,
    #[serde(default)]
    bindings: BTreeMap<String, String>,
}

fn default_id() -> String {
    "id".into()
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawThresholds {
    decile: Option<i64>,
    credit: Option<f64>,
    income: Option<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawColumns {
    #[serde(default)]
    sensitive: ColumnList,
    #[serde(default)]
    nonsensitive: ColumnList,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ColumnList {
    #[serde(default)]
    names: Vec<String>,
}

impl AuditConfig {
    pub fn from_toml_str(text: &str) -> Result<AuditConfig, DatasetError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| DatasetError::Config(e.to_string()))?;
        let thresholds = ThresholdConfig {
            decile_threshold: raw.thresholds.decile.unwrap_or(5),
            credit_threshold: raw.thresholds.credit,
            income_threshold: raw.thresholds.income,
            sensitive_columns: raw.columns.sensitive.names,
            nonsensitive_columns: raw.columns.nonsensitive.names,
        };
        thresholds.validate()?;
        Ok(AuditConfig {
            id_column: raw.id_column,
            thresholds,
            schema: raw.schema,
            bindings: raw.bindings,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<AuditConfig, DatasetError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| DatasetError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        AuditConfig::from_toml_str(&text)
    }

    /// The declared schema, with columns ordered as in the CSV header. Columns the config does
    /// not type are left for inference.
    pub fn schema_for(&self, header: &[String], records: &[Vec<String>]) -> Schema {
        let inferred = Schema::infer(header, records);
        match &self.schema {
            None => inferred,
            Some(decl) => Schema::new(
                inferred
                    .columns()
                    .iter()
                    .map(|(n, t)| (n.clone(), decl.get(n).copied().unwrap_or(*t)))
                    .collect(),
            ),
        }
    }

    /// Renders the effective configuration (used as the report's config echo).
    pub fn echo(&self) -> String {
        let t = &self.thresholds;
        let mut s = format!(
            "id_column={} decile_threshold={}",
            self.id_column, t.decile_threshold
        );
        if let Some(c) = t.credit_threshold {
            s += &format!(" credit_threshold={c}");
        }
        if let Some(i) = t.income_threshold {
            s += &format!(" income_threshold={i}");
        }
        s += &format!(
            " sensitive=[{}] nonsensitive=[{}]",
            t.sensitive_columns.join(","),
            t.nonsensitive_columns.join(",")
        );
        for (k, v) in &self.bindings {
            s += &format!(" {k}=\"{v}\"");
        }
        s
    }
}
