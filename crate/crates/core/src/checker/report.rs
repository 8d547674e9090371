use std::fmt;

use serde_json::{json, Map, Value};

use crate::exactfield::Scalar;
use crate::structures::{BasisIndex, Element, HalfInt};

/// One named index of an identity instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexValue {
    Int(i64),
    Half(HalfInt),
    Basis(BasisIndex),
}

impl IndexValue {
    fn to_json(self) -> Value {
        match self {
            IndexValue::Int(m) => json!(m),
            IndexValue::Half(r) => json!(r.to_string()),
            IndexValue::Basis(b) => json!(b.to_string()),
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Int(m) => write!(f, "{m}"),
            IndexValue::Half(r) => write!(f, "{r}"),
            IndexValue::Basis(b) => write!(f, "{b}"),
        }
    }
}

impl From<i64> for IndexValue {
    fn from(m: i64) -> Self {
        IndexValue::Int(m)
    }
}

impl From<HalfInt> for IndexValue {
    fn from(r: HalfInt) -> Self {
        IndexValue::Half(r)
    }
}

impl From<BasisIndex> for IndexValue {
    fn from(b: BasisIndex) -> Self {
        IndexValue::Basis(b)
    }
}

pub type Indices = Vec<(&'static str, IndexValue)>;

fn indices_json(indices: &Indices) -> Value {
    let mut map = Map::new();
    for (k, v) in indices {
        map.insert((*k).to_string(), v.to_json());
    }
    Value::Object(map)
}

fn indices_text(indices: &Indices) -> String {
    let parts: Vec<String> = indices.iter().map(|(k, v)| format!("{k}={v}")).collect();
    parts.join(", ")
}

/// What an identity instance evaluated to instead of zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residual<S> {
    Scalar(S),
    Element(Element<S>),
    /// The instance could not be evaluated, e.g. a product missing from a table.
    Undefined(String),
}

impl<S: Scalar> fmt::Display for Residual<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Scalar(s) => write!(f, "{s}"),
            Residual::Element(e) => write!(f, "{e}"),
            Residual::Undefined(why) => write!(f, "undefined: {why}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation<S> {
    pub identity: String,
    pub indices: Indices,
    pub residual: Residual<S>,
}

/// An instance that was skipped because a table-backed system could not evaluate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unchecked {
    pub identity: String,
    pub indices: Indices,
    pub reason: String,
}

/// Outcome of one instance.
#[derive(Debug, Clone)]
pub(crate) enum Outcome<S> {
    Violated(Violation<S>),
    Skipped(Unchecked),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationReport<S> {
    pub entries: Vec<Violation<S>>,
    pub unchecked: Vec<Unchecked>,
    /// Number of instances evaluated.
    pub checked: usize,
}

impl<S: Scalar> Default for ViolationReport<S> {
    fn default() -> Self {
        Self {
            entries: Vec::new(),
            unchecked: Vec::new(),
            checked: 0,
        }
    }
}

impl<S: Scalar> ViolationReport<S> {
    pub(crate) fn from_outcomes(outcomes: impl IntoIterator<Item = Outcome<S>>, instances: usize) -> Self {
        let mut report = Self::default();
        for o in outcomes {
            match o {
                Outcome::Violated(v) => report.entries.push(v),
                Outcome::Skipped(u) => report.unchecked.push(u),
            }
        }
        report.checked = instances - report.unchecked.len();
        report.sort();
        report
    }

    pub(crate) fn sort(&mut self) {
        self.entries
            .sort_by(|a, b| (&a.identity, &a.indices).cmp(&(&b.identity, &b.indices)));
        self.unchecked
            .sort_by(|a, b| (&a.identity, &a.indices).cmp(&(&b.identity, &b.indices)));
    }

    pub fn is_clean(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn merge(&mut self, other: Self) {
        self.entries.extend(other.entries);
        self.unchecked.extend(other.unchecked);
        self.checked += other.checked;
        self.sort();
    }

    /// Entries whose identity id starts with `prefix`.
    pub fn with_identity<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Violation<S>> + 'a {
        self.entries.iter().filter(move |v| v.identity.starts_with(prefix))
    }

    pub fn violation_json(&self) -> Vec<Value> {
        self.entries
            .iter()
            .map(|v| {
                json!({
                    "identity": v.identity,
                    "indices": indices_json(&v.indices),
                    "residual": v.residual.to_string(),
                })
            })
            .collect()
    }

    pub fn unchecked_json(&self) -> Vec<Value> {
        self.unchecked
            .iter()
            .map(|u| {
                json!({
                    "identity": u.identity,
                    "indices": indices_json(&u.indices),
                    "reason": u.reason,
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "violations": self.violation_json(),
            "unchecked": self.unchecked_json(),
        })
    }
}

impl<S: Scalar> fmt::Display for ViolationReport<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.entries {
            writeln!(f, "{} [{}]: {}", v.identity, indices_text(&v.indices), v.residual)?;
        }
        for u in &self.unchecked {
            writeln!(f, "{} [{}]: unchecked ({})", u.identity, indices_text(&u.indices), u.reason)?;
        }
        Ok(())
    }
}
