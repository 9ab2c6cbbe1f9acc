use std::collections::HashSet;
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DatasetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnType {
    Integer,
    Real,
    Categorical,
    Boolean,
}

impl fmt::Display for ColumnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ColumnType::Integer => "integer",
            ColumnType::Real => "real",
            ColumnType::Categorical => "categorical",
            ColumnType::Boolean => "boolean",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl Value {
    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Int(i) => Some(i as f64),
            Value::Real(r) => Some(r),
            Value::Bool(b) => Some(if b { 1.0 } else { 0.0 }),
            _ => None,
        }
    }

    /// Truthiness for boolean column reads: `true`, or a nonzero number.
    pub fn truthy(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            Value::Int(i) => Some(*i != 0),
            Value::Real(r) => Some(*r != 0.0),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Real(r) => write!(f, "{r}"),
            Value::Text(s) => f.write_str(s),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Null => f.write_str("null"),
        }
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" => Some(true),
        "false" | "no" => Some(false),
        _ => None,
    }
}

fn coerce(raw: &str, ty: ColumnType) -> Option<Value> {
    let s = raw.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("na") || s.eq_ignore_ascii_case("null") {
        return Some(Value::Null);
    }
    match ty {
        ColumnType::Integer => s.parse().ok().map(Value::Int),
        ColumnType::Real => s
            .parse::<f64>()
            .ok()
            .filter(|r| r.is_finite())
            .map(Value::Real),
        ColumnType::Boolean => parse_bool(s)
            .or(match s {
                "1" => Some(true),
                "0" => Some(false),
                _ => None,
            })
            .map(Value::Bool),
        ColumnType::Categorical => Some(Value::Text(s.to_string())),
    }
}

/// Ordered column names with type tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    columns: Vec<(String, ColumnType)>,
}

impl Schema {
    pub fn new(columns: Vec<(String, ColumnType)>) -> Self {
        Schema { columns }
    }

    pub fn columns(&self) -> &[(String, ColumnType)] {
        &self.columns
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|(n, _)| n == name)
    }

    pub fn column_type(&self, name: &str) -> Option<ColumnType> {
        self.index(name).map(|i| self.columns[i].1)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    /// Narrowest type per column that accepts every non-empty cell:
    /// integer, then real, then boolean, then categorical.
    pub fn infer(header: &[String], records: &[Vec<String>]) -> Schema {
        let columns = header
            .iter()
            .enumerate()
            .map(|(c, name)| {
                let cells = || {
                    records.iter().filter_map(move |r| r.get(c)).filter(|s| {
                        !matches!(coerce(s, ColumnType::Categorical), Some(Value::Null))
                    })
                };
                let ty = [ColumnType::Integer, ColumnType::Real, ColumnType::Boolean]
                    .into_iter()
                    .find(|&ty| cells().all(|s| coerce(s, ty).is_some()))
                    .unwrap_or(ColumnType::Categorical);
                (name.clone(), ty)
            })
            .collect();
        Schema { columns }
    }
}

/// Typed rows with a designated id column. Immutable after loading.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Schema,
    id_column: usize,
    ids: Vec<String>,
    rows: Vec<Vec<Value>>,
}

fn read_records(reader: impl Read) -> Result<(Vec<String>, Vec<Vec<String>>), DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    let mut records = Vec::new();
    for rec in rdr.records() {
        records.push(rec?.iter().map(String::from).collect());
    }
    Ok((header, records))
}

impl Dataset {
    /// Builds a dataset from raw string cells. Columns are matched by name; extra CSV columns
    /// not in `schema` are ignored.
    pub fn from_records(
        schema: &Schema,
        header: &[String],
        records: &[Vec<String>],
        id_column: &str,
    ) -> Result<Dataset, DatasetError> {
        let positions = schema
            .names()
            .map(|name| {
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| DatasetError::MissingColumn(name.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let id_idx = schema
            .index(id_column)
            .ok_or_else(|| DatasetError::MissingColumn(id_column.to_string()))?;
        if records.is_empty() {
            return Err(DatasetError::NoRows);
        }
        let mut rows = Vec::with_capacity(records.len());
        let mut ids = Vec::with_capacity(records.len());
        let mut seen = HashSet::new();
        for (r, rec) in records.iter().enumerate() {
            let mut row = Vec::with_capacity(positions.len());
            for (&(ref name, ty), &pos) in schema.columns.iter().zip(&positions) {
                let raw = rec.get(pos).map(String::as_str).unwrap_or("");
                let v = coerce(raw, ty).ok_or_else(|| DatasetError::Coercion {
                    row: r + 1,
                    column: name.clone(),
                    expected: ty,
                    found: raw.to_string(),
                })?;
                row.push(v);
            }
            let id = match &row[id_idx] {
                Value::Null => {
                    return Err(DatasetError::MissingId { row: r + 1 });
                }
                v => v.to_string(),
            };
            if !seen.insert(id.clone()) {
                return Err(DatasetError::DuplicateId(id));
            }
            ids.push(id);
            rows.push(row);
        }
        Ok(Dataset {
            schema: schema.clone(),
            id_column: id_idx,
            ids,
            rows,
        })
    }

    /// Parses CSV text; `schema` is inferred from the data when `None`.
    pub fn from_csv_reader(
        reader: impl Read,
        schema: Option<&Schema>,
        id_column: &str,
    ) -> Result<Dataset, DatasetError> {
        let (header, records) = read_records(reader)?;
        let inferred;
        let schema = match schema {
            Some(s) => s,
            None => {
                inferred = Schema::infer(&header, &records);
                &inferred
            }
        };
        Dataset::from_records(schema, &header, &records, id_column)
    }

    pub fn from_csv_str(
        text: &str,
        schema: Option<&Schema>,
        id_column: &str,
    ) -> Result<Dataset, DatasetError> {
        Dataset::from_csv_reader(text.as_bytes(), schema, id_column)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn id_column(&self) -> &str {
        &self.schema.columns[self.id_column].0
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, row: usize) -> &str {
        &self.ids[row]
    }

    pub fn row_index(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|i| i == id)
    }

    /// Cell by row position and column name; `None` for unknown columns.
    pub fn value(&self, row: usize, column: &str) -> Option<&Value> {
        self.schema.index(column).map(|c| &self.rows[row][c])
    }

    /// Copy keeping only the rows at `keep` (in the given order).
    pub fn subset(&self, keep: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            id_column: self.id_column,
            ids: keep.iter().map(|&r| self.ids[r].clone()).collect(),
            rows: keep.iter().map(|&r| self.rows[r].clone()).collect(),
        }
    }
}

/// Reads a CSV file. Pass `None` to infer the schema.
pub fn load_csv(
    path: impl AsRef<Path>,
    schema: Option<&Schema>,
    id_column: &str,
) -> Result<Dataset, DatasetError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| DatasetError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Dataset::from_csv_reader(file, schema, id_column)
}
