//! The cocycle chain: off-diagonal sigma, diagonal sigma, then psi and rho.

use crate::structures::{HalfInt, Sector};

use super::engine::{EntryKind, Engine, Explored, InstanceRef, ProcResult, Procedure, TraceEntry};
use super::relation::*;
use super::DeriveError;

pub(crate) fn run(e: &mut Engine) -> Result<(), DeriveError> {
    let odds: Vec<HalfInt> = e.window.odds().collect();
    let evens: Vec<i64> = e.window.evens().collect();

    // (r+s) sigma(r,s) = 0
    for &r in &odds {
        for &s in &odds {
            let inst = e.build(Relation::BFormLGG, args_eoo(0, r, s));
            e.solve("sigma-off-diagonal", &inst, None)?;
        }
    }
    for &s in &odds {
        let inst = e.build(Relation::BFormGGL, args_ooe(s, s, -s.doubled()));
        e.solve("sigma-diagonal", &inst, None)?;
    }
    if e.builder.sector() == Sector::Ramond {
        let zero = HalfInt::ZERO;
        let inst = e.build(Relation::ClosureSigma, args2_oo(zero, zero));
        e.solve("sigma-diagonal", &inst, Some("reconstructed"))?;
    }

    e.build_all(&Relation::CENTRAL);
    e.complete("completion")?;

    if e.builder.sector() == Sector::Ramond {
        for &m in &evens {
            for &n in &evens {
                let x = Unknown::Psi(n, HalfInt::from_int(m));
                if m == 0 || n == 0 || !e.window.contains_odd(HalfInt::from_int(m)) || e.is_assigned(x) {
                    continue;
                }
                if !e.run_procedure(Procedure::PsiPair { m, n })? {
                    e.info("psi-pair", None, format!("unavailable: {x}"));
                }
            }
        }
        e.complete("completion")?;
    }
    Ok(())
}

impl Engine {
    /// With `x = psi(n,m)`: `rho(m,n) = x`, the even-even-odd instance at
    /// `r = 0` gives `psi(m,n)`, and the even-odd-even one is linear in `x`.
    pub(crate) fn psi_pair(&self, m: i64, n: i64) -> Result<Option<ProcResult>, DeriveError> {
        let zero = HalfInt::ZERO;
        let (hm, hn) = (HalfInt::from_int(m), HalfInt::from_int(n));
        let x = Unknown::Psi(n, hm);
        let steps = [
            (Relation::ClosurePsiRho, args2_em(n, hm)),
            (Relation::ClosurePsiRho, args2_em(m, hn)),
            (Relation::BFormLLG, args_eeo(m, n, zero)),
            (Relation::BFormLGL, args_eoe(m, zero, n)),
        ];
        let insts: Vec<Instance> = steps.iter().map(|(r, a)| self.build(*r, a.clone())).collect();
        if !insts.iter().all(|i| i.in_window(&self.window)) {
            return Ok(None);
        }
        let (local, outcome) = self.explore_aux(&self.values, x, &insts);
        let Explored::Closed { closing, poly } = outcome else {
            return Ok(None);
        };
        let candidates = self.specialise_roots(&local, &poly).unwrap_or_default();
        let [(root, _)] = &candidates[..] else {
            return Ok(None);
        };
        let support = steps
            .iter()
            .map(|(r, a)| InstanceRef::new(*r, a.clone()))
            .filter(|r| *r != closing)
            .collect();
        Ok(Some(ProcResult {
            entry: TraceEntry {
                step: "psi-pair".into(),
                instance: Some(closing),
                support,
                assigned: vec![(x, root.clone())],
                note: None,
                kind: EntryKind::Procedure(Procedure::PsiPair { m, n }),
            },
            info: Vec::new(),
        }))
    }
}
