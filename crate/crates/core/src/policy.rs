//! Evaluations, predicates, action sets and policies, plus CSV/JSON ingestion.
//!
//! A policy is a finite table mapping full state evaluations to nonempty sets
//! of permitted actions. Variables are numeric and either integer or real
//! valued; the kind matters for satisfiability of predicate conjunctions, so
//! it is fixed per variable at load time.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numeric kind of a state variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarKind {
    Int,
    Real,
}

/// A constant from a variable domain.
///
/// Equality and hashing are structural (`Int(1) != Real(1.0)`); ordering is
/// numeric with the kind as a tie-breaker, which keeps `Ord` consistent with
/// `Eq`. Within one variable all values share a kind.
#[derive(Clone, Copy, Debug)]
pub enum Value {
    Int(i64),
    Real(f64),
}

impl Value {
    /// Builds a real value, normalizing `-0.0` to `0.0`.
    pub fn real(v: f64) -> Value {
        Value::Real(if v == 0.0 { 0.0 } else { v })
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Value::Int(i) => i as f64,
            Value::Real(r) => r,
        }
    }

    pub fn kind(self) -> VarKind {
        match self {
            Value::Int(_) => VarKind::Int,
            Value::Real(_) => VarKind::Real,
        }
    }

    pub fn is_integral(self) -> bool {
        match self {
            Value::Int(_) => true,
            Value::Real(r) => r.fract() == 0.0 && r.abs() < 9.0e15,
        }
    }

    /// Converts to the representation used by variables of `kind`.
    /// Returns `None` for a non-integral value requested as `Int`.
    pub fn coerce(self, kind: VarKind) -> Option<Value> {
        match (self, kind) {
            (Value::Int(_), VarKind::Int) | (Value::Real(_), VarKind::Real) => Some(self),
            (Value::Int(i), VarKind::Real) => Some(Value::real(i as f64)),
            (Value::Real(r), VarKind::Int) => self.is_integral().then_some(Value::Int(r as i64)),
        }
    }

    /// Numeric comparison ignoring the kind.
    pub fn num_cmp(self, other: Value) -> Ordering {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a.cmp(&b),
            (Value::Real(a), Value::Real(b)) => a.total_cmp(&b),
            (a, b) => a.as_f64().partial_cmp(&b.as_f64()).unwrap_or(Ordering::Equal),
        }
    }

    fn kind_rank(self) -> u8 {
        match self {
            Value::Int(_) => 0,
            Value::Real(_) => 1,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Real(a), Value::Real(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Eq for Value {}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Value::Int(i) => {
                0u8.hash(state);
                i.hash(state);
            }
            Value::Real(r) => {
                1u8.hash(state);
                r.to_bits().hash(state);
            }
        }
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num_cmp(*other).then(self.kind_rank().cmp(&other.kind_rank()))
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Real(r) => write!(f, "{r}"),
        }
    }
}

/// Declaration of one state variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub kind: VarKind,
    /// Sorted distinct values seen in the policy rows.
    pub domain: Vec<Value>,
}

/// A full assignment of values to the policy's variables, positionally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Evaluation(pub Vec<Value>);

impl Evaluation {
    pub fn get(&self, var: usize) -> Option<Value> {
        self.0.get(var).copied()
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Comparison relation of an axis-aligned predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rel {
    Eq,
    Ge,
    Gt,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ge => "≥",
            Rel::Gt => ">",
        }
    }
}

/// `var ~ constant` with `~` one of `=`, `≥`, `>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Predicate {
    pub var: usize,
    pub rel: Rel,
    pub constant: Value,
}

impl Predicate {
    pub fn new(var: usize, rel: Rel, constant: Value) -> Self {
        Predicate { var, rel, constant }
    }

    pub fn gt(var: usize, c: i64) -> Self {
        Predicate::new(var, Rel::Gt, Value::Int(c))
    }

    pub fn ge(var: usize, c: i64) -> Self {
        Predicate::new(var, Rel::Ge, Value::Int(c))
    }

    pub fn eq(var: usize, c: i64) -> Self {
        Predicate::new(var, Rel::Eq, Value::Int(c))
    }

    /// Truth of the predicate for a concrete value of its variable.
    pub fn holds_for(&self, value: Value) -> bool {
        let ord = value.num_cmp(self.constant);
        match self.rel {
            Rel::Eq => ord == Ordering::Equal,
            Rel::Ge => ord != Ordering::Less,
            Rel::Gt => ord == Ordering::Greater,
        }
    }

    /// Renders with variable names, e.g. `x > 2`.
    pub fn render(&self, vars: &[VarDecl]) -> String {
        let name = vars
            .get(self.var)
            .map(|v| v.name.clone())
            .unwrap_or_else(|| format!("v{}", self.var));
        format!("{} {} {}", name, self.rel.symbol(), self.constant)
    }

    /// Renders the negation using the complementary relation (`x ≤ c`, `x < c`, `x ≠ c`).
    pub fn render_negated(&self, vars: &[VarDecl]) -> String {
        let name = vars
            .get(self.var)
            .map(|v| v.name.clone())
            .unwrap_or_else(|| format!("v{}", self.var));
        let sym = match self.rel {
            Rel::Eq => "≠",
            Rel::Ge => "<",
            Rel::Gt => "≤",
        };
        format!("{} {} {}", name, sym, self.constant)
    }
}

/// Satisfaction `e ⊨ p`.
pub fn eval_predicate(p: &Predicate, e: &Evaluation) -> Result<bool> {
    let value = e
        .get(p.var)
        .ok_or_else(|| Error::UnboundVariable(format!("v{}", p.var)))?;
    Ok(p.holds_for(value))
}

/// A canonically ordered set of action identifiers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionSet(Vec<String>);

impl ActionSet {
    pub fn new<I, S>(actions: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut v: Vec<String> = actions.into_iter().map(Into::into).collect();
        v.sort();
        v.dedup();
        ActionSet(v)
    }

    pub fn singleton(action: impl Into<String>) -> Self {
        ActionSet(vec![action.into()])
    }

    /// Parses `{a,b}` or a bare single action.
    pub fn parse(cell: &str) -> Self {
        let cell = cell.trim();
        let inner = cell
            .strip_prefix('{')
            .and_then(|c| c.strip_suffix('}'))
            .unwrap_or(cell);
        ActionSet::new(inner.split(',').map(str::trim).filter(|a| !a.is_empty()))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn contains(&self, action: &str) -> bool {
        self.0.binary_search_by(|a| a.as_str().cmp(action)).is_ok()
    }

    pub fn is_subset(&self, other: &ActionSet) -> bool {
        self.iter().all(|a| other.contains(a))
    }

    pub fn intersection(&self, other: &ActionSet) -> ActionSet {
        ActionSet(self.0.iter().filter(|a| other.contains(a)).cloned().collect())
    }

    pub fn union(&self, other: &ActionSet) -> ActionSet {
        ActionSet::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn first(&self) -> Option<&str> {
        self.0.first().map(String::as_str)
    }
}

impl fmt::Display for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(","))
    }
}

/// Input file format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

/// A controller table: states (full evaluations) to nonempty action sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Policy {
    vars: Vec<VarDecl>,
    rows: BTreeMap<Evaluation, ActionSet>,
    actions: BTreeSet<String>,
}

impl Policy {
    /// Validates and assembles a policy. Missing kinds are inferred: `Int`
    /// when every observed value of the variable is integral.
    pub fn new(vars: Vec<(String, Option<VarKind>)>, rows: Vec<(Vec<Value>, ActionSet)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (name, _) in &vars {
            if !seen.insert(name.clone()) {
                return Err(Error::Format(format!("variable `{name}` declared twice")));
            }
        }
        for (i, (state, actions)) in rows.iter().enumerate() {
            if state.len() != vars.len() {
                return Err(Error::Format(format!(
                    "row {} binds {} values, expected {}",
                    i + 1,
                    state.len(),
                    vars.len()
                )));
            }
            if actions.is_empty() {
                return Err(Error::EmptyActionSet(format!(" in row {}", i + 1)));
            }
        }
        let kinds: Vec<VarKind> = vars
            .iter()
            .enumerate()
            .map(|(i, (_, kind))| {
                kind.unwrap_or_else(|| {
                    if rows.iter().all(|(s, _)| s[i].is_integral()) {
                        VarKind::Int
                    } else {
                        VarKind::Real
                    }
                })
            })
            .collect();

        let mut table = BTreeMap::new();
        let mut universe = BTreeSet::new();
        for (state, actions) in rows {
            let coerced = state
                .iter()
                .zip(&kinds)
                .zip(&vars)
                .map(|((v, k), (name, _))| {
                    v.coerce(*k).ok_or_else(|| {
                        Error::Format(format!("value {v} is not valid for integer variable `{name}`"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let key = Evaluation(coerced);
            universe.extend(actions.iter().map(str::to_string));
            if table.contains_key(&key) {
                return Err(Error::DuplicateState(key.to_string()));
            }
            table.insert(key, actions);
        }

        let decls = vars
            .into_iter()
            .zip(kinds)
            .enumerate()
            .map(|(i, ((name, _), kind))| {
                let domain: BTreeSet<Value> = table.keys().map(|e| e.0[i]).collect();
                VarDecl {
                    name,
                    kind,
                    domain: domain.into_iter().collect(),
                }
            })
            .collect();
        Ok(Policy {
            vars: decls,
            rows: table,
            actions: universe,
        })
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Evaluation, &ActionSet)> {
        self.rows.iter()
    }

    pub fn get(&self, state: &Evaluation) -> Option<&ActionSet> {
        self.rows.get(state)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn actions(&self) -> &BTreeSet<String> {
        &self.actions
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Distinct action-set labels appearing in the table.
    pub fn labels(&self) -> BTreeSet<&ActionSet> {
        self.rows.values().collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let kinds: Vec<&str> = self
            .vars
            .iter()
            .map(|v| match v.kind {
                VarKind::Int => "Int",
                VarKind::Real => "Real",
            })
            .collect();
        out.push_str(&format!("#kinds:{}\n", kinds.join(",")));
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let mut header: Vec<String> = self.vars.iter().map(|v| v.name.clone()).collect();
        header.push("actions".into());
        w.write_record(&header).expect("in-memory write");
        for (state, actions) in &self.rows {
            let mut rec: Vec<String> = state.0.iter().map(Value::to_string).collect();
            rec.push(actions.to_string());
            w.write_record(&rec).expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        out.push_str(&String::from_utf8(bytes).expect("utf-8 output"));
        out
    }

    pub fn to_json(&self) -> String {
        let doc = JsonPolicy {
            vars: self
                .vars
                .iter()
                .map(|v| JsonVar {
                    name: v.name.clone(),
                    kind: Some(v.kind),
                })
                .collect(),
            rows: self
                .rows
                .iter()
                .map(|(state, actions)| JsonRow {
                    state: self
                        .vars
                        .iter()
                        .zip(&state.0)
                        .map(|(d, v)| {
                            let n = match v {
                                Value::Int(i) => serde_json::Number::from(*i),
                                Value::Real(r) => serde_json::Number::from_f64(*r).expect("finite"),
                            };
                            (d.name.clone(), n)
                        })
                        .collect(),
                    actions: actions.iter().map(str::to_string).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct JsonVar {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<VarKind>,
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    state: BTreeMap<String, serde_json::Number>,
    actions: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonPolicy {
    vars: Vec<JsonVar>,
    rows: Vec<JsonRow>,
}

fn parse_value(cell: &str) -> Result<Value> {
    let cell = cell.trim();
    if let Ok(i) = cell.parse::<i64>() {
        return Ok(Value::Int(i));
    }
    match cell.parse::<f64>() {
        Ok(r) if r.is_finite() => Ok(Value::real(r)),
        _ => Err(Error::Format(format!("`{cell}` is not a finite number"))),
    }
}

fn parse_kind(s: &str) -> Result<VarKind> {
    match s.trim() {
        "Int" | "int" => Ok(VarKind::Int),
        "Real" | "real" => Ok(VarKind::Real),
        other => Err(Error::Format(format!("unknown variable kind `{other}`"))),
    }
}

/// Reads a policy from a byte stream in the given format.
pub fn load_policy<R: Read>(mut source: R, format: Format) -> Result<Policy> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| Error::Format(format!("input is not valid UTF-8 text: {e}")))?;
    match format {
        Format::Csv => parse_csv(&text),
        Format::Json => parse_json(&text),
    }
}

/// Reads a policy file, choosing the format by extension.
pub fn load_policy_path(path: &Path) -> Result<Policy> {
    let format = Format::from_path(path)
        .ok_or_else(|| Error::Format(format!("{}: unknown extension, expected .csv or .json", path.display())))?;
    let file = std::fs::File::open(path)?;
    load_policy(file, format)
}

fn parse_csv(text: &str) -> Result<Policy> {
    let mut body = text.trim_start_matches('\u{feff}');
    let mut kinds: Option<Vec<VarKind>> = None;
    let first_line = body.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    if let Some(rest) = first_line.trim().strip_prefix("#kinds:") {
        kinds = Some(rest.split(',').map(parse_kind).collect::<Result<_>>()?);
        let pos = body.find(first_line).unwrap_or(0) + first_line.len();
        body = &body[pos..];
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes());
    let header = reader.headers()?.clone();
    if header.is_empty() || header.get(header.len() - 1) != Some("actions") {
        return Err(Error::Format("header must end with an `actions` column".into()));
    }
    let names: Vec<String> = header.iter().take(header.len() - 1).map(str::to_string).collect();
    if let Some(k) = &kinds {
        if k.len() != names.len() {
            return Err(Error::Format(format!(
                "#kinds directive lists {} kinds for {} variables",
                k.len(),
                names.len()
            )));
        }
    }

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        if record.len() != header.len() {
            return Err(Error::Format(format!(
                "line {line}: expected {} cells, found {}",
                header.len(),
                record.len()
            )));
        }
        let state = record
            .iter()
            .take(names.len())
            .map(parse_value)
            .collect::<Result<Vec<_>>>()?;
        let actions = ActionSet::parse(&record[names.len()]);
        if actions.is_empty() {
            return Err(Error::EmptyActionSet(format!(" on line {line}")));
        }
        rows.push((state, actions));
    }
    let vars = match kinds {
        Some(k) => names.into_iter().zip(k.into_iter().map(Some)).collect(),
        None => names.into_iter().map(|n| (n, None)).collect(),
    };
    Policy::new(vars, rows)
}

fn parse_json(text: &str) -> Result<Policy> {
    let doc: JsonPolicy = serde_json::from_str(text)?;
    let mut rows = Vec::with_capacity(doc.rows.len());
    for (i, row) in doc.rows.iter().enumerate() {
        if row.state.len() != doc.vars.len() {
            return Err(Error::Format(format!(
                "row {} binds {} variables, expected {}",
                i + 1,
                row.state.len(),
                doc.vars.len()
            )));
        }
        let state = doc
            .vars
            .iter()
            .map(|v| {
                let n = row
                    .state
                    .get(&v.name)
                    .ok_or_else(|| Error::Format(format!("row {} does not bind `{}`", i + 1, v.name)))?;
                if let Some(i) = n.as_i64() {
                    Ok(Value::Int(i))
                } else {
                    n.as_f64()
                        .map(Value::real)
                        .ok_or_else(|| Error::Format(format!("`{n}` is not representable")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let actions = ActionSet::new(row.actions.iter().cloned());
        if actions.is_empty() {
            return Err(Error::EmptyActionSet(format!(" in row {}", i + 1)));
        }
        rows.push((state, actions));
    }
    let vars = doc.vars.into_iter().map(|v| (v.name, v.kind)).collect();
    Policy::new(vars, rows)
}
