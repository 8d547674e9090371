//! The centerless chain: seed, forced values, recurrences, sector-specific steps.

use std::collections::BTreeMap;

use crate::checker::IndexValue;
use crate::exactfield::RatFun;
use crate::structures::{HalfInt, Sector};

use super::engine::{EntryKind, Engine, Explored, InstanceRef, ProcResult, Procedure, Scratch, TraceEntry};
use super::relation::*;
use super::DeriveError;

type Step = (Relation, Vec<IndexValue>);

fn half(doubled: i64) -> HalfInt {
    HalfInt::from_doubled(doubled)
}

/// Odd index of the Ramond sector read as an even one.
fn int_of(r: HalfInt) -> i64 {
    r.doubled() / 2
}

/// `1/D(a,b) + 1/D(-b,-a) = 2`, solved for `D(-b,-a)`.
fn reflect(a: HalfInt, b: HalfInt) -> Vec<Step> {
    let k = b.sum_int(-a).expect("sector");
    vec![
        (Relation::AssocGGL, h_from_d(a, k)),
        (Relation::AssocGGL, args_ooe(a, -b, k)),
        (Relation::AssocGGL, h_from_d(-b, k)),
    ]
}

/// `D(r+2s,s) = D(r,s)`.
fn shift(r: HalfInt, s: HalfInt) -> Vec<Step> {
    let k = s.sum_int(-r).expect("sector");
    let n = -r.sum_int(s).expect("sector");
    vec![
        (Relation::AssocGGL, h_from_d(r, k)),
        (Relation::AssocLGL, args_eoe(s.doubled(), r, n)),
        (Relation::AssocGGL, h_from_d(half(2 * s.doubled() + r.doubled()), n)),
    ]
}

impl Engine {
    fn odds(&self) -> Vec<HalfInt> {
        self.window.odds().collect()
    }

    fn evens(&self) -> Vec<i64> {
        self.window.evens().collect()
    }

    fn solve_at(&mut self, step: &str, rel: Relation, args: Vec<crate::checker::IndexValue>) -> Result<(), DeriveError> {
        let inst = self.build(rel, args);
        self.solve(step, &inst, None).map(|_| ())
    }

    /// `H(r,m) D(r,m+r) = -m` for every in-window pair.
    fn h_from_d_family(&self) -> Vec<Instance> {
        let mut args = Vec::new();
        for r in self.odds() {
            for m in self.evens() {
                args.push(h_from_d(r, m));
            }
        }
        self.family(Relation::AssocGGL, args)
    }
}

pub(crate) fn run(e: &mut Engine) -> Result<(), DeriveError> {
    let odds = e.odds();
    let evens = e.evens();

    for &s in &odds {
        e.solve_at("seed", Relation::ClosureDd, args2_oo(s, s))?;
    }

    for &s in &odds {
        e.solve_at("forced", Relation::AssocLGG, args_eoo(0, s, s))?;
        e.solve_at("forced", Relation::ClosureGh, args2_em(0, s))?;
    }
    for &t in &odds {
        e.solve_at("forced", Relation::AssocGGG, args_ooo(-t, -t, t))?;
    }
    for &s in &odds {
        let m = -s.doubled();
        e.solve_at("forced", Relation::ClosureGh, args2_em(m, s))?;
        e.solve_at("forced", Relation::AssocLGG, args_eoo(m, s, s))?;
        e.solve_at("forced", Relation::AssocLGG, args_eoo(m, HalfInt::from_doubled(3 * s.doubled()), s))?;
    }

    // H from D, reflection through GGL at m = -(r+s), shift through LGL at m = -2(n+r).
    let mut rec = e.h_from_d_family();
    let mut ggl = Vec::new();
    for &r in &odds {
        for &s in &odds {
            ggl.push(args_ooe(r, s, -r.sum_int(s).expect("sector")));
        }
    }
    rec.extend(e.family(Relation::AssocGGL, ggl));
    let mut lgl = Vec::new();
    for &r in &odds {
        for &n in &evens {
            lgl.push(args_eoe(-2 * n - r.doubled(), r, n));
        }
    }
    rec.extend(e.family(Relation::AssocLGL, lgl));
    e.propagate("recurrence", &rec)?;

    if e.builder.sector() == Sector::Ramond {
        ramond(e, &rec)?;
    }

    e.build_all(&Relation::CENTERLESS);
    e.complete("completion")?;
    Ok(())
}

fn ramond(e: &mut Engine, rec: &[Instance]) -> Result<(), DeriveError> {
    let odds = e.odds();
    let evens = e.evens();
    let n = e.window.n as i64;

    for &s in &odds {
        for &t in &odds {
            let g = Unknown::G(s.doubled(), t);
            if s == HalfInt::ZERO || !g.in_window(&e.window) || e.is_assigned(g) {
                continue;
            }
            if !e.run_procedure(Procedure::EvenShiftG { s, t })? {
                e.info("even-shift", None, format!("unavailable: {g}"));
            }
        }
    }
    for &s in &odds {
        for &t in &odds {
            if e.window.contains_even(s.doubled()) {
                e.solve_at("even-shift", Relation::ClosureGh, args2_em(s.doubled(), t))?;
            }
        }
    }
    e.propagate("recurrence", rec)?;

    for &m in &odds {
        let x = Unknown::D(HalfInt::ZERO, m);
        if m == HalfInt::ZERO || 2 * int_of(m).abs() > n || e.is_assigned(x) {
            continue;
        }
        if !e.run_procedure(Procedure::Branch { m })? {
            e.info("branch", None, format!("unavailable: {x}"));
            continue;
        }
        let mi = int_of(m);
        e.solve_at("branch", Relation::AssocLGG, args_eoo(mi, HalfInt::ZERO, m))?;
        e.solve_at("branch", Relation::ClosureGh, args2_em(mi, m))?;
        e.solve_at("branch", Relation::AssocGGL, args_ooe(HalfInt::ZERO, m, mi))?;
        e.solve_at("branch", Relation::ClosureGh, args2_em(mi, HalfInt::ZERO))?;
    }
    e.propagate("recurrence", rec)?;

    for &a in &odds {
        for &b in &evens {
            let x = Unknown::G(b, a);
            if a == HalfInt::ZERO || b == 0 || e.is_assigned(x) || !e.window.contains_even(int_of(a)) {
                continue;
            }
            if !e.run_procedure(Procedure::MixedPair { a, b })? {
                e.info("mixed-pair", None, format!("unavailable: {x}"));
            }
        }
    }
    Ok(())
}

fn procedure_entry(step: &str, p: Procedure, steps: &[Step], assigned: Vec<(Unknown, RatFun)>, note: Option<String>) -> TraceEntry {
    let mut refs: Vec<InstanceRef> = steps.iter().map(|(r, a)| InstanceRef::new(*r, a.clone())).collect();
    let main = refs.pop();
    TraceEntry {
        step: step.to_string(),
        instance: main,
        support: refs,
        assigned,
        note,
        kind: EntryKind::Procedure(p),
    }
}

impl Engine {
    fn instances(&self, steps: &[Step]) -> Option<Vec<Instance>> {
        let insts: Vec<Instance> = steps.iter().map(|(r, a)| self.build(*r, a.clone())).collect();
        insts.iter().all(|i| i.in_window(&self.window)).then_some(insts)
    }

    /// `G(2s,t)` with `x = D(s,t)`: two reflections around a shift give
    /// `D(s,t+2s) = x`, and then `2G(2s,t) = 2 D(s,t) H(s,s+t) = -2(s+t)`.
    pub(crate) fn even_shift_g(&self, s: HalfInt, t: HalfInt) -> Result<Option<ProcResult>, DeriveError> {
        let target = Unknown::G(s.doubled(), t);
        let mut steps = reflect(s, t);
        steps.extend(shift(-t, -s));
        steps.extend(reflect(half(-t.doubled() - 2 * s.doubled()), -s));
        steps.push((Relation::AssocGGL, h_from_d(s, s.sum_int(t).expect("sector"))));
        steps.push((Relation::AssocGGG, args_ooo(s, s, t)));
        let Some(insts) = self.instances(&steps) else {
            return Ok(None);
        };
        let (local, outcome) = self.explore_aux(&self.values, Unknown::D(s, t), &insts);
        if let Explored::Contradiction { instance, residual } = outcome {
            return Err(DeriveError::Contradiction {
                instance: instance.to_string(),
                residual: residual.to_string(),
            });
        }
        let Some(value) = local.get(&target).and_then(|v| v.as_constant()) else {
            return Ok(None);
        };
        let p = Procedure::EvenShiftG { s, t };
        Ok(Some(ProcResult {
            entry: procedure_entry("even-shift", p, &steps, vec![(target, value)], Some("reconstructed".into())),
            info: Vec::new(),
        }))
    }

    /// The two candidates for `D(0,m)`; the one that is not `1` must run into
    /// `1/D(0,m) + 1/D(-m,0) = 2` for every admissible `D(0,-m)`.
    pub(crate) fn branch(&self, m: HalfInt) -> Result<Option<ProcResult>, DeriveError> {
        let zero = HalfInt::ZERO;
        let mi = int_of(m);
        let x = Unknown::D(zero, m);
        let steps = vec![
            (Relation::AssocLGG, args_eoo(mi, zero, m)),
            (Relation::ClosureGh, args2_em(mi, m)),
            (Relation::AssocGGL, args_ooe(zero, m, mi)),
            (Relation::AssocGGL, h_from_d(zero, mi)),
        ];
        let Some(insts) = self.instances(&steps) else {
            return Ok(None);
        };
        let (local, outcome) = self.explore_aux(&self.values, x, &insts);
        let Explored::Closed { poly, .. } = outcome else {
            return Ok(None);
        };
        let Some(candidates) = self.specialise_roots(&local, &poly) else {
            return Err(DeriveError::WindowTooSmall(format!("roots of {poly} for {x} are not rational in e")));
        };
        let p = Procedure::Branch { m };
        let mut survivors = Vec::new();
        let mut info = Vec::new();
        for (root, values) in candidates {
            match self.eliminate(m, &values)? {
                None => survivors.push(root),
                Some((killer, reason)) => {
                    let h = values.get(&Unknown::H(m, mi)).map(|v| format!(", H({m},{mi}) = {v}")).unwrap_or_default();
                    info.push(TraceEntry {
                        step: "branch".into(),
                        instance: Some(killer),
                        support: Vec::new(),
                        assigned: Vec::new(),
                        note: Some(format!("branch-rejected: {x} = {root}{h}: {reason}")),
                        kind: EntryKind::Info,
                    });
                }
            }
        }
        match survivors.len() {
            1 => {
                let mut all = steps.clone();
                all.extend(elimination_steps(m));
                Ok(Some(ProcResult {
                    entry: procedure_entry("branch", p, &all, vec![(x, survivors.remove(0))], None),
                    info,
                }))
            }
            0 => Err(DeriveError::Contradiction {
                instance: format!("branch at {x}"),
                residual: "no candidate survives".into(),
            }),
            _ => Err(DeriveError::WindowTooSmall(format!("both candidates for {x} survive"))),
        }
    }

    /// `None` if the candidate survives; otherwise the instance that contradicts it.
    fn eliminate(&self, m: HalfInt, candidate: &BTreeMap<Unknown, RatFun>) -> Result<Option<(InstanceRef, String)>, DeriveError> {
        let mut base = self.values.clone();
        base.extend(candidate.iter().map(|(u, v)| (*u, v.clone())));
        let steps = elimination_steps(m);
        let Some(insts) = self.instances(&steps) else {
            return Err(DeriveError::WindowTooSmall(format!("elimination at m = {m} leaves the window")));
        };
        let (y_steps, checks) = insts.split_at(3);
        let y = Unknown::D(HalfInt::ZERO, -m);
        let (local, outcome) = self.explore_aux(&base, y, y_steps);
        let roots = match outcome {
            Explored::Contradiction { instance, residual } => return Ok(Some((instance, format!("residual {residual}")))),
            Explored::Open => return Ok(None),
            Explored::Closed { poly, .. } => self
                .specialise_roots(&local, &poly)
                .ok_or_else(|| DeriveError::WindowTooSmall(format!("roots of {poly} for {y} are not rational in e")))?,
        };
        let nonzero = |u: Unknown| self.provably_nonzero(u);
        let mut last = None;
        for (_, values) in roots {
            let mut b = base.clone();
            b.extend(values);
            let mut scratch = Scratch::new(&b);
            match scratch.explore(checks, &nonzero) {
                Explored::Contradiction { instance, residual } => {
                    last = Some((instance, format!("residual {residual}")));
                }
                _ => return Ok(None),
            }
        }
        Ok(Some(last.unwrap_or_else(|| {
            (InstanceRef::of(&y_steps[2]), format!("no admissible value for {y}"))
        })))
    }

    /// `G(b,a)` and `H(a,b)` from the `r = 0` products with `x = G(b,a)`.
    pub(crate) fn mixed_pair(&self, a: HalfInt, b: i64) -> Result<Option<ProcResult>, DeriveError> {
        let ai = int_of(a);
        let zero = HalfInt::ZERO;
        let x = Unknown::G(b, a);
        let steps = vec![
            (Relation::AssocLLG, args_eeo(ai, b, zero)),
            (Relation::AssocLGL, args_eoe(ai, zero, b)),
            (Relation::ClosureGh, args2_em(b, a)),
        ];
        let Some(insts) = self.instances(&steps) else {
            return Ok(None);
        };
        let (local, outcome) = self.explore_aux(&self.values, x, &insts);
        let Explored::Closed { poly, .. } = outcome else {
            return Ok(None);
        };
        let candidates = self.specialise_roots(&local, &poly).unwrap_or_default();
        let [(root, _)] = &candidates[..] else {
            return Ok(None);
        };
        let p = Procedure::MixedPair { a, b };
        Ok(Some(ProcResult {
            entry: procedure_entry("mixed-pair", p, &steps, vec![(x, root.clone())], None),
            info: Vec::new(),
        }))
    }
}

/// With `y = D(0,-m)`: three instances fixing `y`, then three that test the candidate.
fn elimination_steps(m: HalfInt) -> Vec<Step> {
    let zero = HalfInt::ZERO;
    let mi = int_of(m);
    vec![
        (Relation::AssocLGG, args_eoo(mi, zero, -m)),
        (Relation::ClosureDd, args2_oo(zero, -m)),
        (Relation::AssocLGG, args_eoo(mi, -m, -m)),
        (Relation::AssocGGL, h_from_d(zero, mi)),
        (Relation::AssocGGL, h_from_d(-m, mi)),
        (Relation::AssocGGL, args_ooe(zero, -m, mi)),
    ]
}
