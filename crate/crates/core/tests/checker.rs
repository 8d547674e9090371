use virasoro_lsa::checker::*;
use virasoro_lsa::exactfield::{RatFun, Scalar};
use virasoro_lsa::structures::*;
use BasisIndex::*;

fn h(d: i64) -> HalfInt {
    HalfInt::from_doubled(d)
}

fn central(sector: Sector) -> StructureSystem<RatFun> {
    StructureSystem::symbolic(sector, Mode::CentralClosedForm)
}

#[test]
fn central_system_is_clean() {
    for sector in Sector::both() {
        let sys = central(sector);
        let w = Window::new(5, sector);
        for (name, r) in Checker::default().all(&sys, &w) {
            assert!(r.is_clean(), "{name} theta={sector}: {r}");
            assert!(r.unchecked.is_empty());
            assert!(r.checked > 0);
        }
    }
}

#[test]
fn overridden_diagonal_d_is_reported_once() {
    let sys = central(Sector::NeveuSchwarz).with_override(CoeffKey::D(h(1), h(1)), RatFun::from_i64(2));
    let r = check_closure(&sys, &Window::new(3, Sector::NeveuSchwarz));
    assert_eq!(r.entries.len(), 1, "{r}");
    let v = &r.entries[0];
    assert_eq!(v.identity, "closure.d");
    assert_eq!(v.indices, vec![("r", IndexValue::Half(h(1))), ("s", IndexValue::Half(h(1)))]);
    // 2 + 2 - 2
    assert_eq!(v.residual, Residual::Scalar(RatFun::from_i64(2)));
}

#[test]
fn trivial_window_ramond_centerless() {
    let sys = StructureSystem::symbolic(Sector::Ramond, Mode::CenterlessClosedForm);
    let r = check_closure(&sys, &Window::new(0, Sector::Ramond));
    assert!(r.is_clean());
    // f at (0,0), g-h at (0,0), d at (0,0)
    assert_eq!(r.checked, 3);
}

#[test]
fn virasoro_system_n10() {
    let sys = StructureSystem::symbolic(Sector::NeveuSchwarz, Mode::VirasoroClosedForm);
    let w = Window::new(10, Sector::NeveuSchwarz);
    assert_eq!(sys.basis(&w).len(), 22);
    for r in [check_left_symmetry(&sys, &w), check_bracket_compatibility(&sys, &w), check_closure(&sys, &w)] {
        assert!(r.is_clean(), "{r}");
    }
}

#[test]
fn shifted_g_breaks_left_symmetry() {
    let sector = Sector::NeveuSchwarz;
    let mut sys = central(sector);
    for m in -7..=7 {
        for d in (-15..=15).step_by(2) {
            let g = sys.coeff_g(m, h(d)).unwrap();
            sys = sys.with_override(CoeffKey::G(m, h(d)), g.plus(&RatFun::one()));
        }
    }
    let r = check_left_symmetry(&sys, &Window::new(2, sector));
    assert!(r.with_identity("left-symmetry.LLG").next().is_some());
}

#[test]
fn centerless_matches_centerless_bracket() {
    for sector in Sector::both() {
        let sys = StructureSystem::symbolic(sector, Mode::CenterlessClosedForm);
        let w = Window::new(8, sector);
        assert!(check_bracket_compatibility(&sys, &w).is_clean());
        assert!(sys.basis(&w).iter().all(|b| *b != C));
    }
}

#[test]
fn vanishing_phi_misses_central_charge() {
    let n = 6;
    let mut sys = central(Sector::Ramond);
    for m in -n..=n {
        sys = sys.with_override(CoeffKey::Phi(m, -m), RatFun::zero());
    }
    let r = check_bracket_compatibility(&sys, &Window::new(n as u32, Sector::Ramond));
    let mut hit: Vec<(BasisIndex, BasisIndex)> = r
        .entries
        .iter()
        .map(|v| match (v.indices[0].1, v.indices[1].1) {
            (IndexValue::Basis(a), IndexValue::Basis(b)) => (a, b),
            _ => unreachable!(),
        })
        .collect();
    hit.sort();
    let mut expected: Vec<_> = (-n..=n).filter(|m: &i64| m.abs() >= 2).map(|m| (L(m), L(-m))).collect();
    expected.sort();
    assert_eq!(hit, expected);
}

#[test]
fn super_jacobi_reference() {
    for sector in Sector::both() {
        let r: ViolationReport<RatFun> = check_super_jacobi(sector, &Window::new(6, sector));
        assert!(r.is_clean());
    }
    let sector = Sector::NeveuSchwarz;
    let w = Window::new(3, sector);
    let mut basis: Vec<BasisIndex> = w.evens().map(L).collect();
    basis.extend(w.odds().map(G));
    basis.push(C);
    let flipped = |a: BasisIndex, b: BasisIndex| -> Element<RatFun> {
        let e: Element<RatFun> = target_bracket(sector, a, b);
        if let (G(_), G(_)) = (a, b) {
            let c = e.coeff(&C);
            let mut out = e.clone();
            out.add_term(C, c.times(&RatFun::from_i64(-2)));
            out
        } else {
            e
        }
    };
    let r = Checker::default().super_jacobi_with(&basis, flipped);
    assert!(!r.is_clean());
}

#[test]
fn annihilator_cases() {
    let sector = Sector::NeveuSchwarz;
    let sys = central(sector);
    let r = check_annihilator(&sys, &Window::new(0, sector)).unwrap();
    assert!(r.is_clean());
    assert_eq!(r.checked, 5);

    let centerless = StructureSystem::symbolic(sector, Mode::CenterlessClosedForm);
    assert!(check_annihilator(&centerless, &Window::new(2, sector)).is_err());

    let w = Window::new(1, sector);
    let mut table = sys.product_table(&w).unwrap();
    table.remove(C, L(1));
    table.remove(G(h(1)), C);
    let t = StructureSystem::from_table(sector, table, "symbolic".into()).unwrap();
    let r = check_annihilator(&t, &w).unwrap();
    assert_eq!(r.entries.len(), 2, "{r}");
    assert!(r.entries.iter().all(|v| matches!(v.residual, Residual::Undefined(_))));
}

#[test]
fn table_backed_skips_are_unchecked() {
    let sector = Sector::Ramond;
    let w = Window::new(2, sector);
    let t = StructureSystem::from_table(sector, central(sector).product_table(&w).unwrap(), "symbolic".into()).unwrap();
    let r = check_left_symmetry(&t, &w);
    assert!(r.is_clean(), "{r}");
    assert!(!r.unchecked.is_empty());
    assert_eq!(r.checked + r.unchecked.len(), check_left_symmetry(&central(sector), &w).checked);
}

#[test]
fn one_override_per_family_is_caught() {
    let sector = Sector::Ramond;
    let w = Window::new(3, sector);
    let keys = [
        CoeffKey::F(1, 2),
        CoeffKey::G(-1, h(2)),
        CoeffKey::H(h(0), 2),
        CoeffKey::D(h(2), h(-4)),
        CoeffKey::Phi(2, -2),
        CoeffKey::Psi(1, h(-2)),
        CoeffKey::Rho(h(2), 0),
        CoeffKey::Sigma(h(2), h(-2)),
    ];
    for key in keys {
        let sys = central(sector);
        let v = sys.coeff(key).unwrap();
        let bad = sys.with_override(key, v.plus(&RatFun::epsilon()));
        let total: usize = Checker::default().all(&bad, &w).iter().map(|(_, r)| r.entries.len()).sum();
        assert!(total > 0, "{key}");
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let sector = Sector::NeveuSchwarz;
    let sys = central(sector).with_override(CoeffKey::H(h(1), 1), RatFun::from_i64(3));
    let w = Window::new(2, sector);
    let seq = Checker::new(Exec::Sequential).all(&sys, &w);
    let par = Checker::new(Exec::Parallel).all(&sys, &w);
    assert_eq!(seq, par);
    let json = |r: &[(&str, ViolationReport<RatFun>)]| {
        r.iter().map(|(_, x)| x.to_json().to_string()).collect::<Vec<_>>()
    };
    assert_eq!(json(&seq), json(&par));
    assert!(seq.iter().any(|(_, r)| !r.is_clean()));
}

#[test]
fn numeric_specialisation_is_clean() {
    let sector = Sector::Ramond;
    let sys = StructureSystem::numeric(sector, Mode::CentralClosedForm, "3/5".parse().unwrap()).unwrap();
    for (name, r) in Checker::default().all(&sys, &Window::new(3, sector)) {
        assert!(r.is_clean(), "{name}: {r}");
    }
}

#[test]
fn report_json_shape() {
    let sys = central(Sector::NeveuSchwarz).with_override(CoeffKey::D(h(1), h(1)), RatFun::from_i64(2));
    let r = check_closure(&sys, &Window::new(1, Sector::NeveuSchwarz));
    let v = &r.violation_json()[0];
    assert_eq!(v.to_string(), r#"{"identity":"closure.d","indices":{"r":"1/2","s":"1/2"},"residual":"2"}"#);
}
