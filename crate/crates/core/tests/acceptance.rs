//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use virasoro_lsa::checker::*;
use virasoro_lsa::deriver::*;
use virasoro_lsa::exactfield::{GaussianRational, RatFun, Scalar};
use virasoro_lsa::structures::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() <= limit, || format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn central(sector: Sector) -> StructureSystem<RatFun> {
    StructureSystem::symbolic(sector, Mode::CentralClosedForm)
}

fn all_clean<S: Scalar>(reports: &[(&str, ViolationReport<S>)], what: &str) -> Result<usize, String> {
    let mut checked = 0;
    for (name, r) in reports {
        ensure(r.is_clean(), || format!("{what}: {name} has {} violations, first {}", r.entries.len(), r.violation_json()[0]))?;
        checked += r.checked;
    }
    Ok(checked)
}

fn theory_validity() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for sector in Sector::both() {
        let sys = central(sector);
        let w = Window::new(8, sector);
        let reports = vec![
            ("left-symmetry", check_left_symmetry(&sys, &w)),
            ("closure", check_closure(&sys, &w)),
            ("bracket", check_bracket_compatibility(&sys, &w)),
            ("annihilator", check_annihilator(&sys, &w).map_err(|e| e.to_string())?),
            ("jacobi", check_super_jacobi::<RatFun>(sector, &w)),
        ];
        for (name, r) in &reports {
            ensure(r.unchecked.is_empty() && r.checked > 0, || format!("theta={sector} {name}: nothing checked"))?;
        }
        total += all_clean(&reports, &format!("theta={sector}"))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{total} instances, both sectors, N=8"))
}

fn even_sector() -> Outcome {
    let sys = StructureSystem::symbolic(Sector::NeveuSchwarz, Mode::VirasoroClosedForm);
    let w = Window::new(10, Sector::NeveuSchwarz);
    let ls = check_left_symmetry(&sys, &w);
    let br = check_bracket_compatibility(&sys, &w);
    ensure(ls.checked > 0 && br.checked > 0, || "no left-symmetry instances".into())?;
    let n = all_clean(&[("left-symmetry", ls), ("bracket", br)], "virasoro")?;
    Ok(format!("{n} instances, N=10"))
}

fn centerless_uniqueness() -> Outcome {
    let start = Instant::now();
    let mut rejected = 0;
    for sector in Sector::both() {
        let w = Window::new(6, sector);
        let d = derive_centerless(sector, w).map_err(|e| e.to_string())?;
        ensure(d.covers(3, 6), || format!("theta={sector}: derived region misses the |m|<=3, |2r|<=6 box"))?;
        let t = &d.tables;
        ensure(t.d.values().all(|v| v.is_one()), || "D is not identically 1".into())?;
        for (&(r, m), v) in &t.h {
            ensure(*v == RatFun::from_i64(-m), || format!("H({r},{m}) = {v}"))?;
        }
        for (&(m, r), v) in &t.g {
            let want = RatFun::from_ratio(-(m + r.doubled()), 2);
            ensure(*v == want, || format!("G({m},{r}) = {v}"))?;
        }
        let cross = cross_check(t, &StructureSystem::symbolic(sector, Mode::CenterlessClosedForm));
        ensure(cross.is_clean(), || format!("cross-check: {cross}"))?;
        if sector == Sector::Ramond {
            for m in [1i64, -1] {
                let alt = RatFun::from_i64(-m).divided(&RatFun::linear(1, m)).unwrap();
                let needle = format!("H({m},{m}) = {alt}");
                let found = d.trace.entries.iter().any(|e| {
                    e.note.as_deref().is_some_and(|n| n.starts_with("branch-rejected") && n.contains(&needle))
                });
                ensure(found, || format!("no rejection of {needle}"))?;
                rejected += 1;
            }
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("both sectors at N=6, {rejected} alternative branches rejected"))
}

fn central_uniqueness() -> Outcome {
    let start = Instant::now();
    for sector in Sector::both() {
        let d = derive_central(sector, Window::new(6, sector)).map_err(|e| e.to_string())?;
        ensure(d.covers(3, 6), || format!("theta={sector}: derived region misses the box"))?;
        let t = &d.tables;
        let eps = RatFun::epsilon();
        let e_minus_inv = eps.minus(&eps.inverse().unwrap());
        for (&(r, s), v) in &t.sigma {
            let want = if r.doubled() + s.doubled() == 0 {
                let r2 = r.doubled();
                RatFun::from_i64(r2 * r2 - 1)
                    .plus(&e_minus_inv.times(&RatFun::from_i64(r2)))
                    .times(&RatFun::from_ratio(1, 24))
            } else {
                RatFun::zero()
            };
            ensure(*v == want, || format!("sigma({r},{s}) = {v}, expected {want}"))?;
        }
        ensure(t.psi.values().chain(t.rho.values()).all(|v| v.is_zero()), || "psi or rho nonzero".into())?;
        let cross = cross_check_central(t, &central(sector));
        ensure(cross.is_clean(), || format!("cross-check: {cross}"))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok("both sectors at N=6".into())
}

fn specialisation() -> Outcome {
    let mut products = 0;
    for eps in ["3/5", "7/3", "2/3*i"] {
        let e0: GaussianRational = eps.parse().map_err(|e| format!("{e}"))?;
        for sector in Sector::both() {
            let w = Window::new(6, sector);
            let num = StructureSystem::numeric(sector, Mode::CentralClosedForm, e0.clone()).map_err(|e| e.to_string())?;
            all_clean(&Checker::default().all(&num, &w), &format!("eps={eps} theta={sector}"))?;
            let sym = central(sector);
            for a in sym.basis(&w) {
                for b in sym.basis(&w) {
                    let exact = sym.basis_product(a, b).map_err(|e| e.to_string())?;
                    let at = exact.try_map(|c| c.eval(&e0)).map_err(|e| e.to_string())?;
                    let direct = num.basis_product(a, b).map_err(|e| e.to_string())?;
                    ensure(at == direct, || format!("{a}*{b} at eps={eps}: {direct} vs {at}"))?;
                    products += 1;
                }
            }
        }
    }
    Ok(format!("3 values of eps, {products} products compared"))
}

fn perturbation() -> Outcome {
    let mut caught = 0;
    for sector in Sector::both() {
        let w = Window::new(6, sector);
        let theta = sector.theta();
        let checks = |sys: &StructureSystem<RatFun>| -> Vec<(&'static str, ViolationReport<RatFun>)> {
            let c = Checker::default();
            vec![
                ("closure", c.closure(sys, &w)),
                ("left-symmetry", c.left_symmetry(sys, &w)),
                ("bracket", c.bracket_compatibility(sys, &w)),
            ]
        };
        all_clean(&checks(&central(sector)), &format!("unmodified theta={sector}"))?;
        let keys = [
            CoeffKey::F(1, 2),
            CoeffKey::G(1, theta),
            CoeffKey::H(theta, 1),
            CoeffKey::D(theta, theta.shift(1)),
            CoeffKey::Phi(2, -2),
            CoeffKey::Psi(1, theta),
            CoeffKey::Rho(theta, 1),
            CoeffKey::Sigma(theta, -theta),
        ];
        for key in keys {
            let base = central(sector);
            let value = base.coeff(key).map_err(|e| e.to_string())?.plus(&RatFun::one());
            let sys = base.with_override(key, value);
            let found: usize = checks(&sys).iter().map(|(_, r)| r.entries.len()).sum();
            ensure(found > 0, || format!("override of {key} at theta={sector} went unnoticed"))?;
            caught += 1;
        }
    }
    Ok(format!("{caught}/16 single-entry overrides detected, unmodified systems clean"))
}

fn closure_values() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for sector in Sector::both() {
        let r = check_closure(&central(sector), &Window::new(12, sector));
        n += all_clean(&[("closure", r)], &format!("theta={sector}"))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{n} instances at N=12"))
}

fn table_round_trip() -> Outcome {
    let mut summary = Vec::new();
    for sector in Sector::both() {
        let w = Window::new(4, sector);
        let sys = central(sector);
        let text = sys.table_json(&w).map_err(|e| e.to_string())?;
        let back = StructureSystem::<RatFun>::from_table_json(&text).map_err(|e| e.to_string())?;
        ensure(back.table_json(&w).map_err(|e| e.to_string())? == text, || "re-emitted table differs".into())?;
        let c = Checker::default();
        let table_run = c.all(&back, &w);
        let closed_run = c.all(&sys, &w);
        all_clean(&table_run, &format!("table theta={sector}"))?;
        all_clean(&closed_run, &format!("closed form theta={sector}"))?;
        let mut skipped = 0;
        for ((name, t), (_, cf)) in table_run.iter().zip(&closed_run) {
            ensure(t.checked + t.unchecked.len() == cf.checked, || {
                format!("{name}: {} checked + {} skipped vs {} in the closed-form run", t.checked, t.unchecked.len(), cf.checked)
            })?;
            for u in &t.unchecked {
                ensure(u.reason.starts_with("missing product"), || format!("{name}: skipped for {}", u.reason))?;
            }
            skipped += t.unchecked.len();
        }
        summary.push(format!("theta={sector}: {skipped} instances need products beyond N=4"));
    }
    Ok(summary.join("; "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("validity of the super structures", theory_validity),
        ("even-sector structure", even_sector),
        ("centerless uniqueness replay", centerless_uniqueness),
        ("central uniqueness replay", central_uniqueness),
        ("numeric specialisation", specialisation),
        ("perturbation sensitivity", perturbation),
        ("closure forced values", closure_values),
        ("table round trip", table_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}; {secs:.1} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why}; {secs:.1} s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
