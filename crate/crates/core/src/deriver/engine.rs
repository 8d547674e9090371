//! Propagation state: assigned table entries, the trace that justifies them,
//! and local symbolic exploration in one auxiliary unknown.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::checker::IndexValue;
use crate::exactfield::{RatFun, Scalar};
use crate::structures::{HalfInt, Window};

use super::aux::{AuxValue, UniPoly};
use super::relation::{h_from_d, Builder, Instance, Relation, Unknown};
use super::DeriveError;

/// Relation and indices of an instance, enough to rebuild it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceRef {
    pub relation: Relation,
    pub args: Vec<IndexValue>,
}

impl InstanceRef {
    pub fn new(relation: Relation, args: Vec<IndexValue>) -> Self {
        Self { relation, args }
    }

    pub fn of(inst: &Instance) -> Self {
        Self::new(inst.relation, inst.args.clone())
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("relation".into(), json!(self.relation.id()));
        for (k, v) in self.relation.index_names().iter().zip(&self.args) {
            let value = match v {
                IndexValue::Int(m) => json!(m),
                other => json!(other.to_string()),
            };
            map.insert((*k).to_string(), value);
        }
        Value::Object(map)
    }
}

impl std::fmt::Display for InstanceRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(", self.relation.id())?;
        for (i, (k, v)) in self.relation.index_names().iter().zip(&self.args).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ")")
    }
}

/// Multi-instance steps, re-run verbatim on replay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Procedure {
    /// `G(2s,t)` with `D(s,t)` carried symbolically (Ramond).
    EvenShiftG { s: HalfInt, t: HalfInt },
    /// The two candidate values of `D(0,m)` and the elimination of one (Ramond).
    Branch { m: HalfInt },
    /// `H(a,b)` and `G(b,a)` from the `r = 0` system with `G(b,a)` symbolic (Ramond).
    MixedPair { a: HalfInt, b: i64 },
    /// `psi(n,m)` from the `r = 0` cocycle system with `psi(n,m)` symbolic (Ramond).
    PsiPair { m: i64, n: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryKind {
    Solve,
    Procedure(Procedure),
    /// Informational: unavailable instances, rejected branches.
    Info,
}

/// One step of a derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: String,
    pub instance: Option<InstanceRef>,
    pub support: Vec<InstanceRef>,
    pub assigned: Vec<(Unknown, RatFun)>,
    pub note: Option<String>,
    pub kind: EntryKind,
}

impl TraceEntry {
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("step".into(), json!(self.step));
        if let Some(inst) = &self.instance {
            map.insert("instance".into(), inst.to_json());
        }
        if !self.support.is_empty() {
            map.insert(
                "support".into(),
                Value::Array(self.support.iter().map(InstanceRef::to_json).collect()),
            );
        }
        let mut assigned = Map::new();
        for (u, v) in &self.assigned {
            assigned.insert(u.to_string(), json!(v.to_string()));
        }
        map.insert("assigned".into(), Value::Object(assigned));
        if let Some(note) = &self.note {
            map.insert("note".into(), json!(note));
        }
        Value::Object(map)
    }
}

/// Ordered list of derivation steps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DerivationTrace {
    pub entries: Vec<TraceEntry>,
}

impl DerivationTrace {
    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.to_json().to_string());
            out.push('\n');
        }
        out
    }

    pub fn assignments(&self) -> impl Iterator<Item = &(Unknown, RatFun)> {
        self.entries.iter().flat_map(|e| e.assigned.iter())
    }
}

/// What one instance says given the current values.
pub(crate) enum Analysis {
    /// No unknown left; the instance evaluates to this.
    Residual(AuxValue),
    /// Exactly one unknown left, solvable without unguarded division.
    Linear(Unknown, AuxValue),
    Stuck,
}

pub(crate) fn analyse(
    inst: &Instance,
    lookup: &dyn Fn(Unknown) -> Option<AuxValue>,
    nonzero: &dyn Fn(Unknown) -> bool,
) -> Analysis {
    let mut constant = AuxValue::zero();
    let mut target: Option<Unknown> = None;
    let mut coeff = AuxValue::zero();
    let mut target_terms = 0;
    let mut guarded = true;
    'terms: for term in &inst.terms {
        let mut value = AuxValue::constant(term.coeff.clone());
        let mut free = Vec::new();
        let mut known = Vec::new();
        for &f in &term.factors {
            match lookup(f) {
                Some(v) if v.is_zero() => continue 'terms,
                Some(v) => {
                    value = value.times(&v);
                    known.push(f);
                }
                None => free.push(f),
            }
        }
        match free[..] {
            [] => constant = constant.plus(&value),
            [u] => {
                if target.is_some_and(|t| t != u) {
                    return Analysis::Stuck;
                }
                target = Some(u);
                coeff = coeff.plus(&value);
                target_terms += 1;
                guarded &= known.iter().all(|&k| nonzero(k));
            }
            _ => return Analysis::Stuck,
        }
    }
    let Some(u) = target else {
        return Analysis::Residual(constant);
    };
    if coeff.is_zero() {
        return Analysis::Stuck;
    }
    if coeff.as_constant().is_none() && !(target_terms == 1 && guarded) {
        return Analysis::Stuck;
    }
    match constant.negated().divided(&coeff) {
        Some(v) => Analysis::Linear(u, v),
        None => Analysis::Stuck,
    }
}

/// Values assigned while exploring, layered over the committed table.
pub(crate) struct Scratch<'a> {
    base: &'a BTreeMap<Unknown, RatFun>,
    pub local: BTreeMap<Unknown, AuxValue>,
}

pub(crate) enum Explored {
    /// An instance reduced to a nonzero polynomial in the auxiliary unknown.
    Closed { closing: InstanceRef, poly: UniPoly },
    /// An instance reduced to a nonzero constant.
    Contradiction { instance: InstanceRef, residual: AuxValue },
    /// Nothing more follows from the given instances.
    Open,
}

impl<'a> Scratch<'a> {
    pub fn new(base: &'a BTreeMap<Unknown, RatFun>) -> Self {
        Self {
            base,
            local: BTreeMap::new(),
        }
    }

    pub fn with_aux(base: &'a BTreeMap<Unknown, RatFun>, aux: Unknown) -> Self {
        let mut s = Self::new(base);
        s.local.insert(aux, AuxValue::var());
        s
    }

    pub fn get(&self, u: Unknown) -> Option<AuxValue> {
        self.local
            .get(&u)
            .cloned()
            .or_else(|| self.base.get(&u).map(|v| AuxValue::constant(v.clone())))
    }

    /// Solve whatever becomes determined until a closing or contradicting instance appears.
    pub fn explore(&mut self, instances: &[Instance], nonzero: &dyn Fn(Unknown) -> bool) -> Explored {
        let mut used = vec![false; instances.len()];
        loop {
            let mut progress = false;
            for (i, inst) in instances.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let lookup = |u: Unknown| self.get(u);
                match analyse(inst, &lookup, nonzero) {
                    Analysis::Linear(u, v) => {
                        self.local.insert(u, v);
                        used[i] = true;
                        progress = true;
                    }
                    Analysis::Residual(r) => {
                        used[i] = true;
                        if r.is_zero() {
                            continue;
                        }
                        if r.as_constant().is_some() {
                            return Explored::Contradiction {
                                instance: InstanceRef::of(inst),
                                residual: r,
                            };
                        }
                        return Explored::Closed {
                            closing: InstanceRef::of(inst),
                            poly: r.numerator().clone(),
                        };
                    }
                    Analysis::Stuck => {}
                }
            }
            if !progress {
                return Explored::Open;
            }
        }
    }
}

pub(crate) struct Engine {
    pub builder: Builder,
    pub window: Window,
    pub values: BTreeMap<Unknown, RatFun>,
    origin: BTreeMap<Unknown, usize>,
    pub trace: Vec<TraceEntry>,
    /// Every in-window instance of the relations in play, built once.
    pub all: Vec<Instance>,
}

impl Engine {
    pub fn new(builder: Builder, window: Window) -> Self {
        Self {
            builder,
            window,
            values: BTreeMap::new(),
            origin: BTreeMap::new(),
            trace: Vec::new(),
            all: Vec::new(),
        }
    }

    pub fn build(&self, relation: Relation, args: Vec<IndexValue>) -> Instance {
        self.builder.build(relation, &args)
    }

    /// Instances of `relation` at each of `args` that lie inside the window.
    pub fn family(&self, relation: Relation, args: impl IntoIterator<Item = Vec<IndexValue>>) -> Vec<Instance> {
        args.into_iter()
            .map(|a| self.build(relation, a))
            .filter(|i| i.in_window(&self.window))
            .collect()
    }

    pub fn build_all(&mut self, relations: &[Relation]) {
        let mut all = Vec::new();
        for &rel in relations {
            all.extend(self.family(rel, rel.index_box(&self.window)));
        }
        self.all = all;
    }

    /// Propagate over every in-window instance.
    pub fn complete(&mut self, step: &str) -> Result<usize, DeriveError> {
        let all = std::mem::take(&mut self.all);
        let out = self.propagate(step, &all);
        self.all = all;
        out
    }

    /// Nonzero in every solution: `H(r,m) D(r,m+r) = -m` forces both factors
    /// nonzero for `m != 0`, and `D(s,s) = 1`.
    pub fn provably_nonzero(&self, u: Unknown) -> bool {
        let w = &self.window;
        match u {
            Unknown::D(r, s) => {
                r == s || match s.doubled() - r.doubled() {
                    d if d % 2 == 0 => {
                        let inst = self.builder.build(Relation::AssocGGL, &h_from_d(r, d / 2));
                        inst.in_window(w)
                    }
                    _ => false,
                }
            }
            Unknown::H(r, m) => m != 0 && self.builder.build(Relation::AssocGGL, &h_from_d(r, m)).in_window(w),
            _ => false,
        }
    }

    pub fn is_assigned(&self, u: Unknown) -> bool {
        self.values.contains_key(&u)
    }

    pub fn record(&mut self, entry: TraceEntry) -> Result<(), DeriveError> {
        let idx = self.trace.len();
        for (u, v) in &entry.assigned {
            if let Some(old) = self.values.get(u) {
                if old != v {
                    let first = self.origin.get(u).map(|&i| self.trace[i].clone());
                    return Err(DeriveError::Inconsistency {
                        unknown: u.to_string(),
                        first: Box::new(first.unwrap_or_else(|| entry.clone())),
                        second: Box::new(entry.clone()),
                    });
                }
            }
        }
        for (u, v) in &entry.assigned {
            self.values.entry(*u).or_insert_with(|| v.clone());
            self.origin.entry(*u).or_insert(idx);
        }
        self.trace.push(entry);
        Ok(())
    }

    pub fn info(&mut self, step: &str, instance: Option<InstanceRef>, note: String) {
        self.trace.push(TraceEntry {
            step: step.to_string(),
            instance,
            support: Vec::new(),
            assigned: Vec::new(),
            note: Some(note),
            kind: EntryKind::Info,
        });
    }

    /// Analyse one instance against the committed table.
    pub fn analyse(&self, inst: &Instance) -> Analysis {
        let lookup = |u: Unknown| self.values.get(&u).map(|v| AuxValue::constant(v.clone()));
        let nonzero = |u: Unknown| self.provably_nonzero(u);
        analyse(inst, &lookup, &nonzero)
    }

    /// Solve a single instance for its one unassigned unknown, if it has one.
    /// An instance with no unknowns left must hold, or the derivation is inconsistent.
    pub fn solve(&mut self, step: &str, inst: &Instance, note: Option<&str>) -> Result<Option<Unknown>, DeriveError> {
        if !inst.in_window(&self.window) {
            self.info(step, Some(InstanceRef::of(inst)), "unavailable".into());
            return Ok(None);
        }
        match self.analyse(inst) {
            Analysis::Linear(u, v) => {
                let value = v.as_constant().expect("committed values are constant");
                self.record(TraceEntry {
                    step: step.to_string(),
                    instance: Some(InstanceRef::of(inst)),
                    support: Vec::new(),
                    assigned: vec![(u, value)],
                    note: note.map(str::to_string),
                    kind: EntryKind::Solve,
                })?;
                Ok(Some(u))
            }
            Analysis::Residual(r) if !r.is_zero() => Err(DeriveError::Contradiction {
                instance: inst.to_string(),
                residual: r.to_string(),
            }),
            _ => Ok(None),
        }
    }

    /// Solve instances of `instances` repeatedly until nothing changes.
    pub fn propagate(&mut self, step: &str, instances: &[Instance]) -> Result<usize, DeriveError> {
        let mut done = vec![false; instances.len()];
        let mut assigned = 0;
        loop {
            let mut progress = false;
            for (i, inst) in instances.iter().enumerate() {
                if done[i] {
                    continue;
                }
                if inst.unknowns().all(|u| self.is_assigned(u)) {
                    done[i] = true;
                    continue;
                }
                if self.solve(step, inst, None)?.is_some() {
                    done[i] = true;
                    assigned += 1;
                    progress = true;
                }
            }
            if !progress {
                return Ok(assigned);
            }
        }
    }
}

/// A procedure's assignment entry plus informational entries it produced.
pub(crate) struct ProcResult {
    pub entry: TraceEntry,
    pub info: Vec<TraceEntry>,
}

impl Engine {
    /// Run a procedure against the committed table without changing it.
    pub fn procedure(&self, p: Procedure) -> Result<ProcResult, DeriveError> {
        let out = match p {
            Procedure::EvenShiftG { s, t } => self.even_shift_g(s, t)?,
            Procedure::Branch { m } => self.branch(m)?,
            Procedure::MixedPair { a, b } => self.mixed_pair(a, b)?,
            Procedure::PsiPair { m, n } => self.psi_pair(m, n)?,
        };
        out.ok_or_else(|| DeriveError::Replay {
            index: self.trace.len(),
            message: format!("{p:?} did not determine a value"),
        })
    }

    /// Run a procedure and commit its entries; `false` if it did not apply.
    pub fn run_procedure(&mut self, p: Procedure) -> Result<bool, DeriveError> {
        let out = match p {
            Procedure::EvenShiftG { s, t } => self.even_shift_g(s, t)?,
            Procedure::Branch { m } => self.branch(m)?,
            Procedure::MixedPair { a, b } => self.mixed_pair(a, b)?,
            Procedure::PsiPair { m, n } => self.psi_pair(m, n)?,
        };
        let Some(out) = out else {
            return Ok(false);
        };
        self.trace.extend(out.info);
        self.record(out.entry)?;
        Ok(true)
    }

    /// Explore `instances` with `aux` symbolic and return the scratch state.
    pub fn explore_aux(&self, base: &BTreeMap<Unknown, RatFun>, aux: Unknown, instances: &[Instance]) -> (BTreeMap<Unknown, AuxValue>, Explored) {
        let nonzero = |u: Unknown| self.provably_nonzero(u);
        let mut scratch = Scratch::with_aux(base, aux);
        let outcome = scratch.explore(instances, &nonzero);
        (scratch.local, outcome)
    }

    /// Candidate values obtained by substituting each root of `poly` into `local`.
    pub fn specialise_roots(&self, local: &BTreeMap<Unknown, AuxValue>, poly: &UniPoly) -> Option<Vec<(RatFun, BTreeMap<Unknown, RatFun>)>> {
        let nonzero = |u: Unknown| self.provably_nonzero(u);
        let roots = poly.roots()?;
        let mut out = Vec::new();
        for root in roots {
            let mut values = BTreeMap::new();
            let mut ok = true;
            for (u, v) in local {
                match v.eval(&root) {
                    Some(val) if !(val.is_zero() && nonzero(*u)) => {
                        values.insert(*u, val);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                out.push((root, values));
            }
        }
        Some(out)
    }
}
