//! Exhaustive verification of the defining identities over a finite index window.
//!
//! Closed-form systems are evaluated at every intermediate index, so a window
//! check is the full identity on the box. Table-backed systems report instances
//! they cannot evaluate as unchecked rather than as violations.

mod exec;
mod report;

use std::collections::HashMap;

use crate::exactfield::Scalar;
use crate::structures::{
    bracket_elements, target_bracket, target_bracket_centerless, BasisIndex, Element, HalfInt, Sector,
    StructureError, StructureSystem, Window,
};

pub use exec::Exec;
pub use report::{IndexValue, Indices, Residual, Unchecked, Violation, ViolationReport};
use report::Outcome;

fn letter(b: BasisIndex) -> char {
    match b {
        BasisIndex::L(_) => 'L',
        BasisIndex::G(_) => 'G',
        BasisIndex::C => 'c',
    }
}

fn family_id(prefix: &str, bs: &[BasisIndex]) -> String {
    let mut s = format!("{prefix}.");
    s.extend(bs.iter().map(|&b| letter(b)));
    s
}

fn basis_indices(names: &[&'static str], bs: &[BasisIndex]) -> Indices {
    names.iter().zip(bs).map(|(n, &b)| (*n, IndexValue::Basis(b))).collect()
}

fn judge<S: Scalar>(identity: String, indices: Indices, value: Result<Residual<S>, StructureError>) -> Option<Outcome<S>> {
    match value {
        Ok(Residual::Scalar(s)) if s.is_zero() => None,
        Ok(Residual::Element(e)) if e.is_zero() => None,
        Ok(residual) => Some(Outcome::Violated(Violation {
            identity,
            indices,
            residual,
        })),
        Err(StructureError::OutOfWindow(what)) => Some(Outcome::Skipped(Unchecked {
            identity,
            indices,
            reason: format!("missing product {what}"),
        })),
        Err(e) => Some(Outcome::Violated(Violation {
            identity,
            indices,
            residual: Residual::Undefined(e.to_string()),
        })),
    }
}

/// Accumulates instances of one sweep.
struct Sweep<S> {
    outcomes: Vec<Outcome<S>>,
    instances: usize,
}

impl<S: Scalar> Sweep<S> {
    fn new() -> Self {
        Self {
            outcomes: Vec::new(),
            instances: 0,
        }
    }

    fn scalar(&mut self, identity: &str, indices: Indices, value: Result<S, StructureError>) {
        self.instances += 1;
        self.outcomes
            .extend(judge(identity.to_string(), indices, value.map(Residual::Scalar)));
    }

    fn element(&mut self, identity: String, indices: Indices, value: Result<Element<S>, StructureError>) {
        self.instances += 1;
        self.outcomes.extend(judge(identity, indices, value.map(Residual::Element)));
    }

    fn finish(sweeps: Vec<Sweep<S>>) -> ViolationReport<S> {
        let instances = sweeps.iter().map(|s| s.instances).sum();
        ViolationReport::from_outcomes(sweeps.into_iter().flat_map(|s| s.outcomes), instances)
    }
}

/// Basis products memoised over the doubled window, which covers every
/// intermediate index of an associator with arguments in the window.
struct Products<'a, S> {
    sys: &'a StructureSystem<S>,
    cache: HashMap<(BasisIndex, BasisIndex), Result<Element<S>, StructureError>>,
}

impl<'a, S: Scalar> Products<'a, S> {
    fn new(sys: &'a StructureSystem<S>, window: &Window, exec: Exec) -> Self {
        let wide = Window::new(2 * window.n + 1, window.sector);
        let basis = sys.basis(&wide);
        let rows = exec.map(&basis, |&a| {
            basis
                .iter()
                .map(|&b| ((a, b), sys.basis_product(a, b)))
                .collect::<Vec<_>>()
        });
        Self {
            sys,
            cache: rows.into_iter().flatten().collect(),
        }
    }

    fn product(&self, a: BasisIndex, b: BasisIndex) -> Result<Element<S>, StructureError> {
        match self.cache.get(&(a, b)) {
            Some(r) => r.clone(),
            None => self.sys.basis_product(a, b),
        }
    }

    fn left_times(&self, x: &Element<S>, b: BasisIndex) -> Result<Element<S>, StructureError> {
        let mut out = Element::zero();
        for (a, c) in x.terms() {
            out.add_scaled(&self.product(*a, b)?, c);
        }
        Ok(out)
    }

    fn right_times(&self, a: BasisIndex, y: &Element<S>) -> Result<Element<S>, StructureError> {
        let mut out = Element::zero();
        for (b, c) in y.terms() {
            out.add_scaled(&self.product(a, *b)?, c);
        }
        Ok(out)
    }

    fn associator(&self, x: BasisIndex, y: BasisIndex, z: BasisIndex) -> Result<Element<S>, StructureError> {
        let left = self.left_times(&self.product(x, y)?, z)?;
        let right = self.right_times(x, &self.product(y, z)?)?;
        Ok(left.minus(&right))
    }
}

/// Runs the checks with a chosen scheduling strategy.
#[derive(Debug, Clone, Copy, Default)]
pub struct Checker {
    pub exec: Exec,
}

impl Checker {
    pub fn new(exec: Exec) -> Self {
        Self { exec }
    }

    /// Scalar compatibility conditions `f(m,n)-f(n,m) = m-n`, `g(m,r)-h(r,m) = m/2-r`,
    /// `d(r,s)+d(s,r) = 2` and, with a center, their cocycle counterparts.
    pub fn closure<S: Scalar>(&self, sys: &StructureSystem<S>, window: &Window) -> ViolationReport<S> {
        let evens: Vec<i64> = window.evens().collect();
        let odds: Vec<HalfInt> = if sys.has_odd() { window.odds().collect() } else { Vec::new() };
        let central = sys.has_center();
        let mut rows = self.exec.map(&evens, |&m| {
            let mut sw = Sweep::new();
            for &n in evens.iter().filter(|&&n| n >= m) {
                let idx = vec![("m", m.into()), ("n", n.into())];
                let f = sys
                    .coeff_f(m, n)
                    .and_then(|a| Ok(a.minus(&sys.coeff_f(n, m)?).minus(&S::from_i64(m - n))));
                sw.scalar("closure.f", idx.clone(), f);
                if central {
                    let expected = if m + n == 0 { S::from_ratio(m * m * m - m, 12) } else { S::zero() };
                    let phi = sys
                        .coeff_phi(m, n)
                        .and_then(|a| Ok(a.minus(&sys.coeff_phi(n, m)?).minus(&expected)));
                    sw.scalar("closure.phi", idx, phi);
                }
            }
            for &r in &odds {
                let idx = vec![("m", m.into()), ("r", r.into())];
                let expected = S::from_ratio(m - r.doubled(), 2);
                let gh = sys
                    .coeff_g(m, r)
                    .and_then(|a| Ok(a.minus(&sys.coeff_h(r, m)?).minus(&expected)));
                sw.scalar("closure.gh", idx.clone(), gh);
                if central {
                    let pr = sys.coeff_psi(m, r).and_then(|a| Ok(a.minus(&sys.coeff_rho(r, m)?)));
                    sw.scalar("closure.psi-rho", idx, pr);
                }
            }
            sw
        });
        rows.extend(self.exec.map(&odds, |&r| {
            let mut sw = Sweep::new();
            for &s in odds.iter().filter(|&&s| s >= r) {
                let idx = vec![("r", r.into()), ("s", s.into())];
                let d = sys
                    .coeff_d(r, s)
                    .and_then(|a| Ok(a.plus(&sys.coeff_d(s, r)?).minus(&S::from_i64(2))));
                sw.scalar("closure.d", idx.clone(), d);
                if central {
                    let r2 = r.doubled();
                    let expected = if r2 + s.doubled() == 0 { S::from_ratio(r2 * r2 - 1, 12) } else { S::zero() };
                    let sigma = sys
                        .coeff_sigma(r, s)
                        .and_then(|a| Ok(a.plus(&sys.coeff_sigma(s, r)?).minus(&expected)));
                    sw.scalar("closure.sigma", idx, sigma);
                }
            }
            sw
        }));
        Sweep::finish(rows)
    }

    /// `(x,y,z) = (-1)^(|x||y|) (y,x,z)` for every basis triple in the window.
    pub fn left_symmetry<S: Scalar>(&self, sys: &StructureSystem<S>, window: &Window) -> ViolationReport<S> {
        let basis = sys.basis(window);
        let products = Products::new(sys, window, self.exec);
        let rows = self.exec.map(&basis, |&x| {
            let mut sw = Sweep::new();
            for &y in basis.iter().filter(|&&y| y >= x) {
                let negative = x.parity().koszul_negative(y.parity());
                if x == y && !negative {
                    continue;
                }
                for &z in &basis {
                    let value = products.associator(x, y, z).and_then(|a| {
                        let b = products.associator(y, x, z)?;
                        Ok(if negative { a.plus(&b) } else { a.minus(&b) })
                    });
                    let triple = [x, y, z];
                    sw.element(
                        family_id("left-symmetry", &triple),
                        basis_indices(&["x", "y", "z"], &triple),
                        value,
                    );
                }
            }
            sw
        });
        Sweep::finish(rows)
    }

    /// Super-commutators of the product against the reference bracket.
    pub fn bracket_compatibility<S: Scalar>(&self, sys: &StructureSystem<S>, window: &Window) -> ViolationReport<S> {
        let basis = sys.basis(window);
        let sector = sys.sector();
        let central = sys.has_center();
        let rows = self.exec.map(&basis, |&a| {
            let mut sw = Sweep::new();
            for &b in &basis {
                let target: Element<S> = if central {
                    target_bracket(sector, a, b)
                } else {
                    target_bracket_centerless(sector, a, b)
                };
                let value = sys
                    .super_commutator(&Element::basis(a), &Element::basis(b))
                    .map(|c| c.minus(&target));
                let pair = [a, b];
                sw.element(family_id("bracket", &pair), basis_indices(&["x", "y"], &pair), value);
            }
            sw
        });
        Sweep::finish(rows)
    }

    /// Super-Jacobi identity of an arbitrary bracket on basis triples.
    pub fn super_jacobi_with<S, B>(&self, basis: &[BasisIndex], bracket: B) -> ViolationReport<S>
    where
        S: Scalar,
        B: Fn(BasisIndex, BasisIndex) -> Element<S> + Sync + Send,
    {
        let rows = self.exec.map(basis, |&a| {
            let mut sw = Sweep::new();
            for &b in basis {
                for &c in basis {
                    let ea = Element::basis(a);
                    let eb = Element::basis(b);
                    let ec = Element::basis(c);
                    let value = (|| {
                        let lhs = bracket_elements(&bracket, &ea, &bracket_elements(&bracket, &eb, &ec)?)?;
                        let first = bracket_elements(&bracket, &bracket_elements(&bracket, &ea, &eb)?, &ec)?;
                        let second = bracket_elements(&bracket, &eb, &bracket_elements(&bracket, &ea, &ec)?)?;
                        let signed = if a.parity().koszul_negative(b.parity()) {
                            second.negated()
                        } else {
                            second
                        };
                        Ok(lhs.minus(&first).minus(&signed))
                    })();
                    let triple = [a, b, c];
                    sw.element(family_id("jacobi", &triple), basis_indices(&["x", "y", "z"], &triple), value);
                }
            }
            sw
        });
        Sweep::finish(rows)
    }

    /// Super-Jacobi identity of the reference bracket, central term included.
    pub fn super_jacobi<S: Scalar>(&self, sector: Sector, window: &Window) -> ViolationReport<S> {
        let mut basis: Vec<BasisIndex> = window.evens().map(BasisIndex::L).collect();
        basis.extend(window.odds().map(BasisIndex::G));
        basis.push(BasisIndex::C);
        self.super_jacobi_with(&basis, |a, b| target_bracket(sector, a, b))
    }

    /// `c*x = x*c = 0` for every basis vector `x` in the window.
    pub fn annihilator<S: Scalar>(
        &self,
        sys: &StructureSystem<S>,
        window: &Window,
    ) -> Result<ViolationReport<S>, StructureError> {
        if !sys.has_center() {
            return Err(StructureError::Mode(format!(
                "annihilator check needs a central element; {:?} has none",
                sys.mode()
            )));
        }
        let mut sw = Sweep::new();
        for x in sys.basis(window) {
            let mut pairs = vec![(BasisIndex::C, x)];
            if x != BasisIndex::C {
                pairs.push((x, BasisIndex::C));
            }
            for (a, b) in pairs {
                // a missing rule is a violation here, not a skipped instance
                let value = sys.basis_product(a, b).map_err(|e| match e {
                    StructureError::OutOfWindow(w) => StructureError::Mode(format!("no rule for {w}")),
                    other => other,
                });
                let pair = [a, b];
                sw.element("annihilator".to_string(), basis_indices(&["x", "y"], &pair), value);
            }
        }
        Ok(Sweep::finish(vec![sw]))
    }

    /// Every check that applies to `sys`, keyed by check name.
    pub fn all<S: Scalar>(&self, sys: &StructureSystem<S>, window: &Window) -> Vec<(&'static str, ViolationReport<S>)> {
        let mut out = vec![
            ("closure", self.closure(sys, window)),
            ("left-symmetry", self.left_symmetry(sys, window)),
            ("bracket", self.bracket_compatibility(sys, window)),
        ];
        if sys.has_odd() {
            out.push(("jacobi", self.super_jacobi(sys.sector(), window)));
        } else {
            let mut basis: Vec<BasisIndex> = window.evens().map(BasisIndex::L).collect();
            basis.push(BasisIndex::C);
            let sector = sys.sector();
            out.push(("jacobi", self.super_jacobi_with(&basis, |a, b| target_bracket(sector, a, b))));
        }
        if let Ok(r) = self.annihilator(sys, window) {
            out.push(("annihilator", r));
        }
        out
    }
}

pub fn check_closure<S: Scalar>(sys: &StructureSystem<S>, window: &Window) -> ViolationReport<S> {
    Checker::default().closure(sys, window)
}

pub fn check_left_symmetry<S: Scalar>(sys: &StructureSystem<S>, window: &Window) -> ViolationReport<S> {
    Checker::default().left_symmetry(sys, window)
}

pub fn check_bracket_compatibility<S: Scalar>(sys: &StructureSystem<S>, window: &Window) -> ViolationReport<S> {
    Checker::default().bracket_compatibility(sys, window)
}

pub fn check_super_jacobi<S: Scalar>(sector: Sector, window: &Window) -> ViolationReport<S> {
    Checker::default().super_jacobi(sector, window)
}

pub fn check_annihilator<S: Scalar>(
    sys: &StructureSystem<S>,
    window: &Window,
) -> Result<ViolationReport<S>, StructureError> {
    Checker::default().annihilator(sys, window)
}
