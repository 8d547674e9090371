//! Re-derivation of the unique centerless and central solutions by explicit
//! propagation over instantiated constraint equations.
//!
//! Every assignment is justified by one recorded equation instance (or a
//! recorded multi-instance procedure) whose other values were already known,
//! so a trace can be replayed and audited step by step.

mod aux;
mod central;
mod centerless;
mod engine;
mod relation;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::checker::{Exec, IndexValue, Residual, Violation, ViolationReport};
use crate::exactfield::{RatFun, Scalar};
use crate::structures::{HalfInt, Sector, StructureSystem, Window};

pub use aux::{AuxValue, UniPoly};
pub use engine::{DerivationTrace, EntryKind, InstanceRef, Procedure, TraceEntry};
pub use relation::{Builder, Instance, Relation, Term, Unknown};

use engine::{Analysis, Engine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("inconsistent values for {unknown}: {} vs {}", first.to_json(), second.to_json())]
    Inconsistency {
        unknown: String,
        first: Box<TraceEntry>,
        second: Box<TraceEntry>,
    },
    #[error("instance {instance} does not hold: residual {residual}")]
    Contradiction { instance: String, residual: String },
    #[error("replay diverged at step {index}: {message}")]
    Replay { index: usize, message: String },
}

/// Smallest window for which the derivation is attempted.
pub const MIN_WINDOW: u32 = 4;

/// Partial tables of the normalised centerless constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedUnknowns {
    pub sector: Sector,
    pub window: Window,
    pub g: BTreeMap<(i64, HalfInt), RatFun>,
    pub h: BTreeMap<(HalfInt, i64), RatFun>,
    pub d: BTreeMap<(HalfInt, HalfInt), RatFun>,
    /// Step that assigned each entry.
    pub provenance: BTreeMap<Unknown, String>,
}

/// Partial tables of the cocycle values on pairs involving an odd vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleUnknowns {
    pub sector: Sector,
    pub window: Window,
    pub sigma: BTreeMap<(HalfInt, HalfInt), RatFun>,
    pub psi: BTreeMap<(i64, HalfInt), RatFun>,
    pub rho: BTreeMap<(HalfInt, i64), RatFun>,
    pub provenance: BTreeMap<Unknown, String>,
}

/// Result of a derivation run.
#[derive(Debug, Clone)]
pub struct Derivation<T> {
    pub tables: T,
    pub trace: DerivationTrace,
    /// In-window unknowns nothing determined.
    pub unassigned: Vec<Unknown>,
    /// Fully assigned instances checked after the run.
    pub verified: usize,
}

impl Derivation<NormalizedUnknowns> {
    /// Whether every `G, H, D` with `|m| <= m_max` and `|2r| <= r2_max` is assigned.
    pub fn covers(&self, m_max: i64, r2_max: i64) -> bool {
        let t = &self.tables;
        let evens: Vec<i64> = (-m_max..=m_max).collect();
        let odds: Vec<HalfInt> = t.window.odds().filter(|r| r.doubled().abs() <= r2_max).collect();
        evens.iter().all(|&m| {
            odds.iter()
                .all(|&r| t.g.contains_key(&(m, r)) && t.h.contains_key(&(r, m)))
        }) && odds.iter().all(|&r| odds.iter().all(|&s| t.d.contains_key(&(r, s))))
    }
}

impl Derivation<CocycleUnknowns> {
    pub fn covers(&self, m_max: i64, r2_max: i64) -> bool {
        let t = &self.tables;
        let odds: Vec<HalfInt> = t.window.odds().filter(|r| r.doubled().abs() <= r2_max).collect();
        (-m_max..=m_max).all(|m| {
            odds.iter()
                .all(|&r| t.psi.contains_key(&(m, r)) && t.rho.contains_key(&(r, m)))
        }) && odds.iter().all(|&r| odds.iter().all(|&s| t.sigma.contains_key(&(r, s))))
    }
}

fn check_window(window: &Window) -> Result<(), DeriveError> {
    if window.n < MIN_WINDOW {
        return Err(DeriveError::WindowTooSmall(format!(
            "N = {} but the chain needs N >= {MIN_WINDOW}",
            window.n
        )));
    }
    Ok(())
}

fn provenance(engine: &Engine) -> BTreeMap<Unknown, String> {
    let mut out = BTreeMap::new();
    for e in &engine.trace {
        for (u, _) in &e.assigned {
            out.entry(*u).or_insert_with(|| e.step.clone());
        }
    }
    out
}

fn normalized(engine: &Engine) -> NormalizedUnknowns {
    let mut t = NormalizedUnknowns {
        sector: engine.builder.sector(),
        window: engine.window,
        g: BTreeMap::new(),
        h: BTreeMap::new(),
        d: BTreeMap::new(),
        provenance: provenance(engine),
    };
    for (u, v) in &engine.values {
        match *u {
            Unknown::G(m, r) => {
                t.g.insert((m, r), v.clone());
            }
            Unknown::H(r, m) => {
                t.h.insert((r, m), v.clone());
            }
            Unknown::D(r, s) => {
                t.d.insert((r, s), v.clone());
            }
            _ => {}
        }
    }
    t
}

fn cocycle(engine: &Engine) -> CocycleUnknowns {
    let mut t = CocycleUnknowns {
        sector: engine.builder.sector(),
        window: engine.window,
        sigma: BTreeMap::new(),
        psi: BTreeMap::new(),
        rho: BTreeMap::new(),
        provenance: provenance(engine),
    };
    for (u, v) in &engine.values {
        match *u {
            Unknown::Sigma(r, s) => {
                t.sigma.insert((r, s), v.clone());
            }
            Unknown::Psi(m, r) => {
                t.psi.insert((m, r), v.clone());
            }
            Unknown::Rho(r, m) => {
                t.rho.insert((r, m), v.clone());
            }
            _ => {}
        }
    }
    t
}

fn all_unknowns(window: &Window, central: bool) -> Vec<Unknown> {
    let mut out = Vec::new();
    for m in window.evens() {
        for r in window.odds() {
            if central {
                out.push(Unknown::Psi(m, r));
                out.push(Unknown::Rho(r, m));
            } else {
                out.push(Unknown::G(m, r));
                out.push(Unknown::H(r, m));
            }
        }
    }
    for r in window.odds() {
        for s in window.odds() {
            out.push(if central { Unknown::Sigma(r, s) } else { Unknown::D(r, s) });
        }
    }
    out
}

/// Evaluate every instance whose unknowns are all assigned.
fn verify(engine: &Engine, exec: Exec) -> Result<usize, DeriveError> {
    let outcomes = exec.map(&engine.all, |inst| {
        if !inst.unknowns().all(|u| engine.is_assigned(u)) {
            return None;
        }
        match engine.analyse(inst) {
            Analysis::Residual(r) if r.is_zero() => Some(Ok(())),
            Analysis::Residual(r) => Some(Err(DeriveError::Contradiction {
                instance: inst.to_string(),
                residual: r.to_string(),
            })),
            _ => unreachable!("fully assigned instance"),
        }
    });
    let mut verified = 0;
    for o in outcomes.into_iter().flatten() {
        o?;
        verified += 1;
    }
    Ok(verified)
}

fn finish<T>(engine: Engine, central: bool, tables: fn(&Engine) -> T) -> Result<Derivation<T>, DeriveError> {
    let verified = verify(&engine, Exec::default())?;
    let unassigned = all_unknowns(&engine.window, central)
        .into_iter()
        .filter(|u| !engine.is_assigned(*u))
        .collect();
    Ok(Derivation {
        tables: tables(&engine),
        trace: DerivationTrace {
            entries: engine.trace,
        },
        unassigned,
        verified,
    })
}

/// Derive the normalised constants `G, H, D` inside `window`.
pub fn derive_centerless(sector: Sector, window: Window) -> Result<Derivation<NormalizedUnknowns>, DeriveError> {
    let window = Window::new(window.n, sector);
    check_window(&window)?;
    let mut engine = Engine::new(Builder::new(sector), window);
    centerless::run(&mut engine)?;
    finish(engine, false, normalized)
}

/// Derive the cocycle values `sigma, psi, rho` inside `window`.
pub fn derive_central(sector: Sector, window: Window) -> Result<Derivation<CocycleUnknowns>, DeriveError> {
    let window = Window::new(window.n, sector);
    check_window(&window)?;
    let mut engine = Engine::new(Builder::new(sector), window);
    central::run(&mut engine)?;
    finish(engine, true, cocycle)
}

/// Re-execute a trace from scratch and return the values it assigns.
pub fn replay(sector: Sector, window: Window, trace: &DerivationTrace) -> Result<BTreeMap<Unknown, RatFun>, DeriveError> {
    let window = Window::new(window.n, sector);
    let mut engine = Engine::new(Builder::new(sector), window);
    for (index, entry) in trace.entries.iter().enumerate() {
        let diverged = |message: String| DeriveError::Replay { index, message };
        let assigned = match &entry.kind {
            EntryKind::Info => continue,
            EntryKind::Solve => {
                let inst_ref = entry
                    .instance
                    .as_ref()
                    .ok_or_else(|| diverged("solve step without an instance".into()))?;
                let inst = engine.build(inst_ref.relation, inst_ref.args.clone());
                match engine.analyse(&inst) {
                    Analysis::Linear(u, v) => vec![(u, v.as_constant().expect("constant"))],
                    _ => return Err(diverged(format!("{inst} does not determine a single unknown"))),
                }
            }
            EntryKind::Procedure(p) => engine.procedure(*p)?.entry.assigned,
        };
        if assigned != entry.assigned {
            return Err(diverged(format!(
                "recorded {:?}, recomputed {:?}",
                entry.assigned, assigned
            )));
        }
        engine.record(entry.clone())?;
    }
    Ok(engine.values)
}

fn compare(report: &mut ViolationReport<RatFun>, identity: &str, indices: Vec<(&'static str, IndexValue)>, derived: &RatFun, expected: RatFun) {
    report.checked += 1;
    let residual = derived.minus(&expected);
    if !residual.is_zero() {
        report.entries.push(Violation {
            identity: identity.to_string(),
            indices,
            residual: Residual::Scalar(residual),
        });
    }
}

/// Undo the normalisation and compare with `sys` entry by entry.
///
/// `g = G (1+2er)/(1+2e(m+r))`, `h = H (1+em)/(1+2e(m+r))`, `d = D (1+2es)/(1+e(r+s))`.
pub fn cross_check(derived: &NormalizedUnknowns, sys: &StructureSystem<RatFun>) -> ViolationReport<RatFun> {
    let mut report = ViolationReport::default();
    let scale = |num: RatFun, den: RatFun| num.divided(&den).expect("nonzero linear factor");
    for (&(m, r), v) in &derived.g {
        let k = scale(RatFun::linear(1, r.doubled()), RatFun::linear(1, 2 * m + r.doubled()));
        if let Ok(expected) = sys.coeff_g(m, r) {
            compare(&mut report, "cross-check.g", vec![("m", m.into()), ("r", r.into())], &v.times(&k), expected);
        }
    }
    for (&(r, m), v) in &derived.h {
        let k = scale(RatFun::linear(1, m), RatFun::linear(1, 2 * m + r.doubled()));
        if let Ok(expected) = sys.coeff_h(r, m) {
            compare(&mut report, "cross-check.h", vec![("r", r.into()), ("m", m.into())], &v.times(&k), expected);
        }
    }
    for (&(r, s), v) in &derived.d {
        let k = scale(RatFun::linear(2, 2 * s.doubled()), RatFun::linear(2, r.doubled() + s.doubled()));
        if let Ok(expected) = sys.coeff_d(r, s) {
            compare(&mut report, "cross-check.d", vec![("r", r.into()), ("s", s.into())], &v.times(&k), expected);
        }
    }
    report.sort();
    report
}

/// Compare derived cocycle values with `sys` entry by entry.
pub fn cross_check_central(derived: &CocycleUnknowns, sys: &StructureSystem<RatFun>) -> ViolationReport<RatFun> {
    let mut report = ViolationReport::default();
    for (&(r, s), v) in &derived.sigma {
        if let Ok(expected) = sys.coeff_sigma(r, s) {
            compare(&mut report, "cross-check.sigma", vec![("r", r.into()), ("s", s.into())], v, expected);
        }
    }
    for (&(m, r), v) in &derived.psi {
        if let Ok(expected) = sys.coeff_psi(m, r) {
            compare(&mut report, "cross-check.psi", vec![("m", m.into()), ("r", r.into())], v, expected);
        }
    }
    for (&(r, m), v) in &derived.rho {
        if let Ok(expected) = sys.coeff_rho(r, m) {
            compare(&mut report, "cross-check.rho", vec![("r", r.into()), ("m", m.into())], v, expected);
        }
    }
    report.sort();
    report
}
