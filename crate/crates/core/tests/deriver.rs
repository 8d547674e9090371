use std::collections::BTreeMap;
use std::sync::OnceLock;

use virasoro_lsa::deriver::*;
use virasoro_lsa::exactfield::{RatFun, Scalar};
use virasoro_lsa::structures::*;

fn h(d: i64) -> HalfInt {
    HalfInt::from_doubled(d)
}

fn rf(s: &str) -> RatFun {
    s.parse().unwrap()
}

fn centerless(sector: Sector) -> &'static Derivation<NormalizedUnknowns> {
    static NS: OnceLock<Derivation<NormalizedUnknowns>> = OnceLock::new();
    static R: OnceLock<Derivation<NormalizedUnknowns>> = OnceLock::new();
    let cell = if sector == Sector::Ramond { &R } else { &NS };
    cell.get_or_init(|| derive_centerless(sector, Window::new(6, sector)).unwrap())
}

fn central(sector: Sector) -> &'static Derivation<CocycleUnknowns> {
    static NS: OnceLock<Derivation<CocycleUnknowns>> = OnceLock::new();
    static R: OnceLock<Derivation<CocycleUnknowns>> = OnceLock::new();
    let cell = if sector == Sector::Ramond { &R } else { &NS };
    cell.get_or_init(|| derive_central(sector, Window::new(6, sector)).unwrap())
}

/// `m/2 + r` as an element of Q(e).
fn half_sum(m: i64, r: HalfInt) -> RatFun {
    RatFun::from_ratio(m + r.doubled(), 2)
}

#[test]
fn seed_fixes_the_diagonal() {
    for sector in Sector::both() {
        let d = centerless(sector);
        for s in Window::new(6, sector).odds() {
            assert_eq!(d.tables.d[&(s, s)], RatFun::one());
            assert_eq!(d.tables.provenance[&Unknown::D(s, s)], "seed");
        }
    }
}

#[test]
fn centerless_tables_are_the_normal_form() {
    for sector in Sector::both() {
        let d = centerless(sector);
        assert!(d.covers(3, 6), "theta={sector}");
        assert!(d.verified > 5000);
        for v in d.tables.d.values() {
            assert_eq!(*v, RatFun::one());
        }
        for (&(r, m), v) in &d.tables.h {
            assert_eq!(*v, RatFun::from_i64(-m), "H({r},{m})");
        }
        for (&(m, r), v) in &d.tables.g {
            assert_eq!(*v, half_sum(m, r).negated(), "G({m},{r})");
        }
        // whatever is left out needs a partner index beyond the window
        for u in &d.unassigned {
            match *u {
                Unknown::G(m, r) | Unknown::H(r, m) => assert!(!d.tables.window.contains_odd(r.shift(m)), "{u}"),
                other => panic!("{other} left unassigned"),
            }
        }
    }
}

#[test]
fn even_shift_values() {
    for sector in Sector::both() {
        let d = centerless(sector);
        let w = d.tables.window;
        for s in w.odds() {
            for t in w.odds() {
                let two_s = s.doubled();
                if w.contains_even(two_s) && w.contains_odd(t.shift(two_s)) {
                    assert_eq!(d.tables.h[&(t, two_s)], RatFun::from_i64(-two_s));
                }
            }
        }
    }
}

#[test]
fn ramond_branch_is_eliminated() {
    let d = centerless(Sector::Ramond);
    let notes: Vec<&str> = d
        .trace
        .entries
        .iter()
        .filter_map(|e| e.note.as_deref())
        .filter(|n| n.starts_with("branch-rejected"))
        .collect();
    for m in [1i64, -1] {
        let root = RatFun::linear(1, m).divided(&RatFun::linear(1, 2 * m)).unwrap();
        let hm = RatFun::from_i64(-m).divided(&RatFun::linear(1, m)).unwrap();
        let expected = format!("D(0,{m}) = {root}, H({m},{m}) = {hm}");
        assert!(notes.iter().any(|n| n.contains(&expected)), "{expected} in {notes:?}");
        assert_eq!(d.tables.d[&(HalfInt::ZERO, HalfInt::from_int(m))], RatFun::one());
    }
    assert_eq!(notes.len(), 2);
    // the neveu-schwarz chain has no branch point
    let ns = centerless(Sector::NeveuSchwarz);
    assert!(ns.trace.entries.iter().all(|e| e.step != "branch"));
}

#[test]
fn cross_check_against_closed_forms() {
    for sector in Sector::both() {
        let sys = StructureSystem::symbolic(sector, Mode::CenterlessClosedForm);
        let r = cross_check(&centerless(sector).tables, &sys);
        assert!(r.is_clean(), "{r}");
        assert!(r.checked > 400);
    }
}

#[test]
fn cross_check_reports_a_single_perturbed_entry() {
    let sector = Sector::NeveuSchwarz;
    let sys = StructureSystem::symbolic(sector, Mode::CenterlessClosedForm)
        .with_override(CoeffKey::G(1, h(1)), RatFun::from_i64(7));
    let r = cross_check(&centerless(sector).tables, &sys);
    assert_eq!(r.entries.len(), 1, "{r}");
    assert_eq!(r.entries[0].identity, "cross-check.g");
    assert_eq!(r.entries[0].indices[0].1.to_string(), "1");
    assert_eq!(r.entries[0].indices[1].1.to_string(), "1/2");

    let sys = StructureSystem::symbolic(Sector::Ramond, Mode::CentralClosedForm)
        .with_override(CoeffKey::Sigma(h(2), h(-2)), RatFun::zero());
    let r = cross_check_central(&central(Sector::Ramond).tables, &sys);
    assert_eq!(r.entries.len(), 1, "{r}");
    assert_eq!(r.entries[0].identity, "cross-check.sigma");
}

#[test]
fn cocycle_values() {
    for sector in Sector::both() {
        let d = central(sector);
        assert!(d.covers(3, 6), "theta={sector}");
        for (&(r, s), v) in &d.tables.sigma {
            if r.doubled() + s.doubled() != 0 {
                assert!(v.is_zero(), "sigma({r},{s})");
            }
        }
        assert!(d.tables.psi.values().all(RatFun::is_zero));
        assert!(d.tables.rho.values().all(RatFun::is_zero));
        let sys = StructureSystem::symbolic(sector, Mode::CentralClosedForm);
        assert!(cross_check_central(&d.tables, &sys).is_clean());
    }
    let ns = central(Sector::NeveuSchwarz);
    assert_eq!(ns.tables.sigma[&(h(1), h(-1))], rf("(e^2 - 1)/(24*e)"));
    assert_eq!(ns.tables.sigma[&(h(3), h(-3))], rf("(8 + 3*(e - 1/e))/24"));
    let r = central(Sector::Ramond);
    assert_eq!(r.tables.sigma[&(HalfInt::ZERO, HalfInt::ZERO)], RatFun::from_ratio(-1, 24));
    assert_eq!(r.tables.sigma[&(h(2), h(-2))], rf("(3 + 2*(e - 1/e))/24"));
}

fn values(trace: &DerivationTrace) -> BTreeMap<Unknown, RatFun> {
    trace.assignments().map(|(u, v)| (*u, v.clone())).collect()
}

#[test]
fn replay_reproduces_the_tables() {
    for sector in Sector::both() {
        let w = Window::new(6, sector);
        let d = centerless(sector);
        let replayed = replay(sector, w, &d.trace).unwrap();
        assert_eq!(replayed, values(&d.trace));
        assert_eq!(replayed.len(), d.tables.g.len() + d.tables.h.len() + d.tables.d.len());
        let c = central(sector);
        assert_eq!(replay(sector, w, &c.trace).unwrap(), values(&c.trace));
    }
}

#[test]
fn replay_rejects_a_tampered_trace() {
    let sector = Sector::Ramond;
    let w = Window::new(6, sector);
    let mut trace = centerless(sector).trace.clone();
    let i = trace.entries.iter().position(|e| e.step == "even-shift" && !e.assigned.is_empty()).unwrap();
    trace.entries[i].assigned[0].1 = RatFun::from_i64(5);
    assert!(matches!(replay(sector, w, &trace), Err(DeriveError::Replay { .. })));

    // out of order: a recurrence step before the seed
    let mut trace = centerless(sector).trace.clone();
    let j = trace.entries.iter().position(|e| e.step == "recurrence").unwrap();
    let entry = trace.entries.remove(j);
    trace.entries.insert(0, entry);
    assert!(replay(sector, w, &trace).is_err());
}

#[test]
fn every_assignment_cites_an_instance() {
    for sector in Sector::both() {
        for e in &centerless(sector).trace.entries {
            if !e.assigned.is_empty() {
                assert!(e.instance.is_some(), "{:?}", e.step);
                assert_eq!(e.assigned.len(), 1);
            }
        }
    }
}

#[test]
fn trace_exports_json_lines() {
    let d = centerless(Sector::NeveuSchwarz);
    let text = d.trace.to_jsonl();
    assert_eq!(text.lines().count(), d.trace.entries.len());
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(
        first,
        serde_json::json!({
            "step": "seed",
            "instance": {"relation": "closure-dd", "r": "-11/2", "s": "-11/2"},
            "assigned": {"D(-11/2,-11/2)": "1"}
        })
    );
    let hd = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .find(|v| v["assigned"].get("H(1/2,3)").is_some())
        .unwrap();
    assert_eq!(hd["assigned"]["H(1/2,3)"], "-3");
}

#[test]
fn small_windows_are_refused() {
    for sector in Sector::both() {
        for n in 0..MIN_WINDOW {
            let w = Window::new(n, sector);
            assert!(matches!(derive_centerless(sector, w), Err(DeriveError::WindowTooSmall(_))));
            assert!(matches!(derive_central(sector, w), Err(DeriveError::WindowTooSmall(_))));
        }
    }
}

#[test]
fn minimal_window_covers_its_box() {
    for sector in Sector::both() {
        let w = Window::new(MIN_WINDOW, sector);
        let d = derive_centerless(sector, w).unwrap();
        assert!(d.covers(2, 4));
        let c = derive_central(sector, w).unwrap();
        assert!(c.covers(2, 4));
    }
}
