use std::collections::BTreeMap;
use std::fmt;

use super::{Dataset, DatasetError, Schema, ThresholdConfig, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
    Ne,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        }
    }

    fn negate(self) -> CmpOp {
        match self {
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
        }
    }

    fn apply<T: PartialOrd>(self, a: T, b: T) -> bool {
        match self {
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
            CmpOp::Le => a <= b,
            CmpOp::Lt => a < b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Number(f64),
    Text(String),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Number(n) => write!(f, "{n}"),
            Literal::Text(s) => write!(f, "\"{s}\""),
        }
    }
}

/// Decidable rule over dataset columns.
#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    /// `column <op> literal`
    Compare {
        column: String,
        op: CmpOp,
        value: Literal,
    },
    /// `column is null`
    IsNull(String),
    /// Bare `column`: boolean read (nonzero numbers count as true).
    Column(String),
    /// Binary: equal on every listed column.
    Similar { columns: Vec<String> },
    /// Binary: equal on every nonsensitive column and different on at least one sensitive one.
    Flip {
        nonsensitive: Vec<String>,
        sensitive: Vec<String>,
    },
    /// Unary: some flip partner of the row has a different `outcome`.
    SensitiveDependence {
        outcome: String,
        nonsensitive: Vec<String>,
        sensitive: Vec<String>,
    },
}

impl Rule {
    pub fn arity(&self) -> usize {
        match self {
            Rule::Similar { .. } | Rule::Flip { .. } => 2,
            _ => 1,
        }
    }

    /// Columns whose null cells make a row unusable for this rule.
    pub fn columns(&self) -> Vec<&str> {
        match self {
            Rule::Compare { column, .. } | Rule::Column(column) => vec![column],
            Rule::IsNull(_) => vec![],
            Rule::Similar { columns } => columns.iter().map(String::as_str).collect(),
            Rule::Flip {
                nonsensitive,
                sensitive,
            } => nonsensitive
                .iter()
                .chain(sensitive)
                .map(String::as_str)
                .collect(),
            Rule::SensitiveDependence {
                outcome,
                nonsensitive,
                sensitive,
            } => std::iter::once(outcome)
                .chain(nonsensitive)
                .chain(sensitive)
                .map(String::as_str)
                .collect(),
        }
    }

    fn all_columns(&self) -> Vec<&str> {
        match self {
            Rule::IsNull(c) => vec![c],
            _ => self.columns(),
        }
    }

    /// Evaluates on the given rows (positions). `domain` is the set of rows a
    /// [`Rule::SensitiveDependence`] may pick partners from.
    pub fn eval(&self, d: &Dataset, rows: &[usize], domain: &[usize]) -> bool {
        let cell = |r: usize, c: &str| {
            d.value(r, c)
                .expect("rule columns are checked against the schema")
        };
        match self {
            Rule::Compare { column, op, value } => compare(cell(rows[0], column), *op, value),
            Rule::IsNull(c) => cell(rows[0], c).is_null(),
            Rule::Column(c) => cell(rows[0], c).truthy().unwrap_or(false),
            Rule::Similar { columns } => {
                columns.iter().all(|c| cell(rows[0], c) == cell(rows[1], c))
            }
            Rule::Flip {
                nonsensitive,
                sensitive,
            } => flip(d, rows[0], rows[1], nonsensitive, sensitive),
            Rule::SensitiveDependence {
                outcome,
                nonsensitive,
                sensitive,
            } => domain.iter().any(|&j| {
                flip(d, rows[0], j, nonsensitive, sensitive)
                    && cell(rows[0], outcome) != cell(j, outcome)
            }),
        }
    }

    /// What the rule demands, e.g. `decile_score >= 5`.
    pub fn requirement(&self) -> String {
        match self {
            Rule::Compare { column, op, value } => format!("{column} {} {value}", op.symbol()),
            Rule::IsNull(c) => format!("{c} is null"),
            Rule::Column(c) => format!("{c} is true"),
            Rule::Similar { columns } => format!("equal {}", columns.join(", ")),
            Rule::Flip {
                nonsensitive,
                sensitive,
            } => format!(
                "equal {} and a different {}",
                nonsensitive.join(", "),
                sensitive.join("/")
            ),
            Rule::SensitiveDependence { outcome, .. } => {
                format!("a flip partner with a different {outcome}")
            }
        }
    }

    /// The requirement of the negated rule, e.g. `outcome != 1`.
    pub fn negated_requirement(&self) -> String {
        match self {
            Rule::Compare { column, op, value } => {
                format!("{column} {} {value}", op.negate().symbol())
            }
            Rule::IsNull(c) => format!("{c} is not null"),
            Rule::Column(c) => format!("{c} is false"),
            _ => format!("not ({})", self.requirement()),
        }
    }

    /// The observed cells that decide the rule on `rows`.
    pub fn evidence(&self, d: &Dataset, rows: &[usize], domain: &[usize]) -> String {
        let cell = |r: usize, c: &str| d.value(r, c).cloned().unwrap_or(Value::Null);
        match self {
            Rule::Compare { column, .. } | Rule::IsNull(column) | Rule::Column(column) => {
                format!("{column} = {}", cell(rows[0], column))
            }
            Rule::Similar { columns } => pair_evidence(d, rows[0], rows[1], columns, &[]),
            Rule::Flip {
                nonsensitive,
                sensitive,
            } => pair_evidence(d, rows[0], rows[1], nonsensitive, sensitive),
            Rule::SensitiveDependence {
                outcome,
                nonsensitive,
                sensitive,
            } => {
                let partners: Vec<&str> = domain
                    .iter()
                    .filter(|&&j| {
                        flip(d, rows[0], j, nonsensitive, sensitive)
                            && cell(rows[0], outcome) != cell(j, outcome)
                    })
                    .map(|&j| d.id(j))
                    .collect();
                if partners.is_empty() {
                    format!("no flip partner of {} differs in {outcome}", d.id(rows[0]))
                } else {
                    format!(
                        "{outcome} differs from flip partner(s) {}",
                        partners.join(", ")
                    )
                }
            }
        }
    }
}

fn compare(v: &Value, op: CmpOp, lit: &Literal) -> bool {
    match (lit, v) {
        (_, Value::Null) => false,
        (Literal::Number(n), v) => match v.as_f64() {
            Some(x) => op.apply(x, *n),
            None => false,
        },
        (Literal::Text(t), v) => op.apply(v.to_string().as_str(), t.as_str()),
    }
}

fn flip(d: &Dataset, i: usize, j: usize, nonsensitive: &[String], sensitive: &[String]) -> bool {
    let same = |c: &String| d.value(i, c) == d.value(j, c);
    nonsensitive.iter().all(same) && !sensitive.iter().all(same)
}

fn pair_evidence(d: &Dataset, i: usize, j: usize, equal: &[String], differ: &[String]) -> String {
    let (a, b) = (d.id(i), d.id(j));
    let cell = |r: usize, c: &str| d.value(r, c).cloned().unwrap_or(Value::Null);
    let mismatched: Vec<String> = equal
        .iter()
        .filter(|c| cell(i, c) != cell(j, c))
        .map(|c| format!("{c} ({} vs {})", cell(i, c), cell(j, c)))
        .collect();
    let differing: Vec<String> = differ
        .iter()
        .filter(|c| cell(i, c) != cell(j, c))
        .map(|c| format!("{c} ({} vs {})", cell(i, c), cell(j, c)))
        .collect();
    let mut s = if mismatched.is_empty() {
        format!("{a} and {b} agree on {}", equal.join(", "))
    } else {
        format!("{a} and {b} differ on {}", mismatched.join(", "))
    };
    if !differ.is_empty() {
        if differing.is_empty() {
            s += &format!(" and agree on {}", differ.join(", "));
        } else {
            s += &format!(" and differ on {}", differing.join(", "));
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredicateBinding {
    pub symbol: String,
    pub arity: usize,
    pub rule: Rule,
}

/// Parses a rule: `col >= 5`, `col == "x"`, `col is null`, `col`, `similar`, `flip`,
/// `sensitive_dependence(col)`. `similar`/`flip` take their column lists from `cfg`.
pub fn parse_rule(text: &str, cfg: &ThresholdConfig) -> Result<Rule, DatasetError> {
    let t = text.trim();
    let bad = || DatasetError::BadRule(text.to_string());
    match t {
        "similar" => {
            return Ok(Rule::Similar {
                columns: cfg.nonsensitive_columns.clone(),
            })
        }
        "flip" => {
            return Ok(Rule::Flip {
                nonsensitive: cfg.nonsensitive_columns.clone(),
                sensitive: cfg.sensitive_columns.clone(),
            })
        }
        _ => {}
    }
    if let Some(inner) = t
        .strip_prefix("sensitive_dependence(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let outcome = inner.trim();
        if !is_ident(outcome) {
            return Err(bad());
        }
        return Ok(Rule::SensitiveDependence {
            outcome: outcome.to_string(),
            nonsensitive: cfg.nonsensitive_columns.clone(),
            sensitive: cfg.sensitive_columns.clone(),
        });
    }
    if let Some(col) = t.strip_suffix("is null") {
        let col = col.trim();
        return if is_ident(col) {
            Ok(Rule::IsNull(col.to_string()))
        } else {
            Err(bad())
        };
    }
    if is_ident(t) {
        return Ok(Rule::Column(t.to_string()));
    }
    for (sym, op) in [
        (">=", CmpOp::Ge),
        ("<=", CmpOp::Le),
        ("==", CmpOp::Eq),
        ("!=", CmpOp::Ne),
        (">", CmpOp::Gt),
        ("<", CmpOp::Lt),
    ] {
        if let Some((lhs, rhs)) = t.split_once(sym) {
            let column = lhs.trim();
            let rhs = rhs.trim();
            if !is_ident(column) {
                return Err(bad());
            }
            let value = if let Some(s) = rhs.strip_prefix('"').and_then(|r| r.strip_suffix('"')) {
                Literal::Text(s.to_string())
            } else {
                Literal::Number(
                    rhs.parse()
                        .ok()
                        .filter(|n: &f64| n.is_finite())
                        .ok_or_else(bad)?,
                )
            };
            return Ok(Rule::Compare {
                column: column.to_string(),
                op,
                value,
            });
        }
    }
    Err(bad())
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    Compas,
    Loan,
}

impl std::str::FromStr for System {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "compas" => Ok(System::Compas),
            "loan" => Ok(System::Loan),
            other => Err(DatasetError::UnknownSuite(other.to_string())),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Compas => "compas",
            System::Loan => "loan",
        })
    }
}

/// Predicate symbol to binding, ordered by symbol name.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Bindings {
    map: BTreeMap<String, PredicateBinding>,
}

impl Bindings {
    pub fn insert(&mut self, symbol: impl Into<String>, rule: Rule) {
        let symbol = symbol.into();
        self.map.insert(
            symbol.clone(),
            PredicateBinding {
                symbol,
                arity: rule.arity(),
                rule,
            },
        );
    }

    pub fn get(&self, symbol: &str) -> Option<&PredicateBinding> {
        self.map.get(symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = &PredicateBinding> {
        self.map.values()
    }

    /// Applies `[bindings]` overrides from the config.
    pub fn with_overrides(
        mut self,
        overrides: &BTreeMap<String, String>,
        cfg: &ThresholdConfig,
    ) -> Result<Self, DatasetError> {
        for (name, text) in overrides {
            self.insert(name.clone(), parse_rule(text, cfg)?);
        }
        Ok(self)
    }

    /// Every column any binding reads must exist in `schema`.
    pub fn check_schema(&self, schema: &Schema) -> Result<(), DatasetError> {
        for b in self.map.values() {
            for c in b.rule.all_columns() {
                if schema.index(c).is_none() {
                    return Err(DatasetError::UnknownBindingColumn {
                        symbol: b.symbol.clone(),
                        column: c.to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

fn cmp(column: &str, op: CmpOp, n: f64) -> Rule {
    Rule::Compare {
        column: column.to_string(),
        op,
        value: Literal::Number(n),
    }
}

/// Default predicate bindings for each suite, checked against `schema`.
pub fn default_bindings(
    system: System,
    cfg: &ThresholdConfig,
    schema: &Schema,
) -> Result<Bindings, DatasetError> {
    cfg.validate()?;
    let mut b = Bindings::default();
    let pair = |b: &mut Bindings, outcome: &str| {
        b.insert("similar", parse_rule("similar", cfg).expect("builtin"));
        b.insert("flip", parse_rule("flip", cfg).expect("builtin"));
        b.insert(
            "sensitive",
            parse_rule(&format!("sensitive_dependence({outcome})"), cfg).expect("builtin"),
        );
        b.insert("appeal", cmp("appeal", CmpOp::Eq, 1.0));
    };
    match system {
        System::Compas => {
            b.insert("priors", cmp("priors_count", CmpOp::Gt, 0.0));
            b.insert("recid", cmp("outcome", CmpOp::Eq, 1.0));
            b.insert(
                "assess",
                cmp("decile_score", CmpOp::Ge, cfg.decile_threshold as f64),
            );
            pair(&mut b, "outcome");
        }
        System::Loan => {
            let need = |t: Option<f64>, name: &str| {
                t.ok_or_else(|| {
                    DatasetError::Config(format!("the loan suite needs thresholds.{name}"))
                })
            };
            b.insert(
                "credit_ok",
                cmp(
                    "credit_score",
                    CmpOp::Ge,
                    need(cfg.credit_threshold, "credit")?,
                ),
            );
            b.insert(
                "income_ok",
                cmp("income", CmpOp::Ge, need(cfg.income_threshold, "income")?),
            );
            b.insert("applied", cmp("applied", CmpOp::Eq, 1.0));
            b.insert("approved", cmp("approved", CmpOp::Eq, 1.0));
            pair(&mut b, "approved");
        }
    }
    b.check_schema(schema)?;
    Ok(b)
}

/// True iff rows `i` and `j` agree on every nonsensitive column.
pub fn similar(d: &Dataset, i: &str, j: &str, cfg: &ThresholdConfig) -> Result<bool, DatasetError> {
    if i == j {
        return Err(DatasetError::SameRow(i.to_string()));
    }
    let ri = d
        .row_index(i)
        .ok_or_else(|| DatasetError::UnknownRow(i.to_string()))?;
    let rj = d
        .row_index(j)
        .ok_or_else(|| DatasetError::UnknownRow(j.to_string()))?;
    for c in &cfg.nonsensitive_columns {
        if d.schema().index(c).is_none() {
            return Err(DatasetError::MissingColumn(c.clone()));
        }
    }
    let rule = Rule::Similar {
        columns: cfg.nonsensitive_columns.clone(),
    };
    Ok(rule.eval(d, &[ri, rj], &[]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loan_cfg() -> ThresholdConfig {
        ThresholdConfig {
            credit_threshold: Some(650.0),
            income_threshold: Some(50000.0),
            sensitive_columns: vec!["gender".into()],
            nonsensitive_columns: vec!["age".into(), "income".into()],
            ..ThresholdConfig::default()
        }
    }

    const LOAN: &str = "\
id,gender,age,income,credit_score,applied,approved,appeal
l1,F,30,40000,600,1,1,0
l2,M,30,40000,600,1,0,1
l3,F,30,45000,600,1,0,1
";

    #[test]
    fn parse_rules() {
        let cfg = loan_cfg();
        assert_eq!(
            parse_rule("decile_score >= 5", &cfg).unwrap(),
            cmp("decile_score", CmpOp::Ge, 5.0)
        );
        assert_eq!(
            parse_rule("x is null", &cfg).unwrap(),
            Rule::IsNull("x".into())
        );
        assert_eq!(
            parse_rule("approved", &cfg).unwrap(),
            Rule::Column("approved".into())
        );
        assert!(matches!(
            parse_rule("race == \"A\"", &cfg).unwrap(),
            Rule::Compare {
                value: Literal::Text(_),
                ..
            }
        ));
        assert_eq!(parse_rule("flip", &cfg).unwrap().arity(), 2);
        assert!(parse_rule("a >= b >= c", &cfg).is_err());
        assert!(parse_rule("income ~ 3", &cfg).is_err());
    }

    #[test]
    fn compas_threshold_example() {
        let d = Dataset::from_csv_str(
            "id,race,gender,age,priors_count,decile_score,outcome,appeal\nr1,A,M,20,0,7,1,1\n",
            None,
            "id",
        )
        .unwrap();
        let b = default_bindings(System::Compas, &ThresholdConfig::default(), d.schema()).unwrap();
        assert!(b.get("assess").unwrap().rule.eval(&d, &[0], &[0]));
        assert!(!b.get("priors").unwrap().rule.eval(&d, &[0], &[0]));
    }

    #[test]
    fn similar_examples() {
        let d = Dataset::from_csv_str(LOAN, None, "id").unwrap();
        let cfg = loan_cfg();
        assert!(similar(&d, "l1", "l2", &cfg).unwrap());
        assert!(!similar(&d, "l1", "l3", &cfg).unwrap());
        assert!(matches!(
            similar(&d, "l1", "l1", &cfg),
            Err(DatasetError::SameRow(_))
        ));
        assert!(matches!(
            similar(&d, "l1", "l9", &cfg),
            Err(DatasetError::UnknownRow(_))
        ));
    }

    #[test]
    fn flip_and_dependence() {
        let d = Dataset::from_csv_str(LOAN, None, "id").unwrap();
        let b = default_bindings(System::Loan, &loan_cfg(), d.schema()).unwrap();
        let all = [0, 1, 2];
        let flip = &b.get("flip").unwrap().rule;
        assert!(flip.eval(&d, &[0, 1], &all));
        assert!(!flip.eval(&d, &[0, 0], &all));
        assert!(!flip.eval(&d, &[0, 2], &all));
        let sens = &b.get("sensitive").unwrap().rule;
        assert!(sens.eval(&d, &[0], &all));
        assert!(!sens.eval(&d, &[2], &all));
        assert_eq!(
            flip.evidence(&d, &[0, 1], &all),
            "l1 and l2 agree on age, income and differ on gender (F vs M)"
        );
    }

    #[test]
    fn missing_column_is_reported() {
        let d = Dataset::from_csv_str("id,x\na,1\n", None, "id").unwrap();
        assert!(matches!(
            default_bindings(System::Compas, &ThresholdConfig::default(), d.schema()),
            Err(DatasetError::UnknownBindingColumn { .. })
        ));
        assert!(matches!(
            default_bindings(System::Loan, &ThresholdConfig::default(), d.schema()),
            Err(DatasetError::Config(_))
        ));
    }
}
