use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::exactfield::{inverse_is_integer, FieldError, GaussianRational, RatFun, Scalar};

use super::{BasisIndex, Element, HalfInt, Sector, StructureError, Window};

/// How a [`StructureSystem`] answers product queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    /// `f, g, h, d` on the centerless algebra spanned by `L_m, G_r`.
    CenterlessClosedForm,
    /// `f, g, h, d` plus the cocycle `phi, psi, rho, sigma`; `c` annihilates everything.
    CentralClosedForm,
    /// The even part only: `L_m, c` with `f` and `phi`.
    VirasoroClosedForm,
    /// Finite product table; lookups outside it are errors.
    TableBacked,
}

/// The eight structure-constant families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    F,
    G,
    H,
    D,
    Phi,
    Psi,
    Rho,
    Sigma,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::F,
        Family::G,
        Family::H,
        Family::D,
        Family::Phi,
        Family::Psi,
        Family::Rho,
        Family::Sigma,
    ];
}

/// One structure constant, e.g. `g(m, r)` is the `G_{m+r}` coefficient of `L_m * G_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoeffKey {
    F(i64, i64),
    G(i64, HalfInt),
    H(HalfInt, i64),
    D(HalfInt, HalfInt),
    Phi(i64, i64),
    Psi(i64, HalfInt),
    Rho(HalfInt, i64),
    Sigma(HalfInt, HalfInt),
}

impl CoeffKey {
    pub fn family(self) -> Family {
        match self {
            CoeffKey::F(..) => Family::F,
            CoeffKey::G(..) => Family::G,
            CoeffKey::H(..) => Family::H,
            CoeffKey::D(..) => Family::D,
            CoeffKey::Phi(..) => Family::Phi,
            CoeffKey::Psi(..) => Family::Psi,
            CoeffKey::Rho(..) => Family::Rho,
            CoeffKey::Sigma(..) => Family::Sigma,
        }
    }

    /// The basis product this constant belongs to, and the basis vector it multiplies.
    pub fn location(self) -> Option<(BasisIndex, BasisIndex, BasisIndex)> {
        use BasisIndex::*;
        Some(match self {
            CoeffKey::F(m, n) => (L(m), L(n), L(m + n)),
            CoeffKey::G(m, r) => (L(m), G(r), G(r.shift(m))),
            CoeffKey::H(r, m) => (G(r), L(m), G(r.shift(m))),
            CoeffKey::D(r, s) => (G(r), G(s), L(r.sum_int(s)?)),
            CoeffKey::Phi(m, n) => (L(m), L(n), C),
            CoeffKey::Psi(m, r) => (L(m), G(r), C),
            CoeffKey::Rho(r, m) => (G(r), L(m), C),
            CoeffKey::Sigma(r, s) => (G(r), G(s), C),
        })
    }

    fn odd_indices(self) -> impl Iterator<Item = HalfInt> {
        let v: [Option<HalfInt>; 2] = match self {
            CoeffKey::F(..) | CoeffKey::Phi(..) => [None, None],
            CoeffKey::G(_, r) | CoeffKey::H(r, _) | CoeffKey::Psi(_, r) | CoeffKey::Rho(r, _) => {
                [Some(r), None]
            }
            CoeffKey::D(r, s) | CoeffKey::Sigma(r, s) => [Some(r), Some(s)],
        };
        v.into_iter().flatten()
    }
}

impl fmt::Display for CoeffKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffKey::F(m, n) => write!(f, "f({m},{n})"),
            CoeffKey::G(m, r) => write!(f, "g({m},{r})"),
            CoeffKey::H(r, m) => write!(f, "h({r},{m})"),
            CoeffKey::D(r, s) => write!(f, "d({r},{s})"),
            CoeffKey::Phi(m, n) => write!(f, "phi({m},{n})"),
            CoeffKey::Psi(m, r) => write!(f, "psi({m},{r})"),
            CoeffKey::Rho(r, m) => write!(f, "rho({r},{m})"),
            CoeffKey::Sigma(r, s) => write!(f, "sigma({r},{s})"),
        }
    }
}

/// Finite map from basis pairs to their products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTable<S> {
    products: BTreeMap<(BasisIndex, BasisIndex), Element<S>>,
}

impl<S: Scalar> Default for ProductTable<S> {
    fn default() -> Self {
        Self {
            products: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> ProductTable<S> {
    pub fn insert(&mut self, left: BasisIndex, right: BasisIndex, product: Element<S>) {
        self.products.insert((left, right), product);
    }

    pub fn remove(&mut self, left: BasisIndex, right: BasisIndex) -> Option<Element<S>> {
        self.products.remove(&(left, right))
    }

    pub fn get(&self, left: BasisIndex, right: BasisIndex) -> Option<&Element<S>> {
        self.products.get(&(left, right))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(BasisIndex, BasisIndex), &Element<S>)> {
        self.products.iter()
    }

    pub fn len(&self) -> usize {
        self.products.len()
    }

    pub fn is_empty(&self) -> bool {
        self.products.is_empty()
    }

    fn mentions(&self, pred: impl Fn(BasisIndex) -> bool) -> bool {
        self.products
            .keys()
            .any(|&(a, b)| pred(a) || pred(b))
    }

    pub fn has_center(&self) -> bool {
        self.mentions(|b| b == BasisIndex::C)
            || self
                .products
                .values()
                .any(|e| e.terms().any(|(b, _)| *b == BasisIndex::C))
    }

    pub fn has_odd(&self) -> bool {
        self.mentions(|b| matches!(b, BasisIndex::G(_)))
    }

    /// Smallest `n` whose window in `sector` covers every stored index.
    pub fn window_bound(&self, sector: Sector) -> u32 {
        let mut n = 0u64;
        for &(a, b) in self.products.keys() {
            for x in [a, b] {
                match x {
                    BasisIndex::L(m) => n = n.max(m.unsigned_abs()),
                    BasisIndex::G(r) => {
                        n = n.max((r.doubled() - sector.doubled_parity()).unsigned_abs() / 2)
                    }
                    BasisIndex::C => {}
                }
            }
        }
        n as u32
    }
}

/// A candidate graded product on the (super-)Virasoro basis.
#[derive(Debug, Clone)]
pub struct StructureSystem<S> {
    sector: Sector,
    mode: Mode,
    epsilon: S,
    eps_minus_inv: S,
    epsilon_label: String,
    overrides: BTreeMap<CoeffKey, S>,
    table: Option<ProductTable<S>>,
}

impl StructureSystem<RatFun> {
    /// Closed-form system over Q(e), `e` symbolic.
    pub fn symbolic(sector: Sector, mode: Mode) -> Self {
        assert!(mode != Mode::TableBacked, "use from_table for table-backed systems");
        let eps = RatFun::epsilon();
        Self::closed_form(sector, mode, eps, "symbolic".into()).expect("e is invertible")
    }
}

impl StructureSystem<GaussianRational> {
    /// Closed-form system with `e` fixed to `eps0`; rejects `eps0` with `1/eps0` an integer.
    pub fn numeric(sector: Sector, mode: Mode, eps0: GaussianRational) -> Result<Self, StructureError> {
        if inverse_is_integer(&eps0) {
            return Err(StructureError::InadmissibleEpsilon(eps0.to_string()));
        }
        let label = eps0.to_string();
        Self::closed_form(sector, mode, eps0, label)
    }
}

impl<S: Scalar> StructureSystem<S> {
    pub fn closed_form(sector: Sector, mode: Mode, epsilon: S, label: String) -> Result<Self, StructureError> {
        let inv = epsilon
            .inverse()
            .map_err(|_| StructureError::InadmissibleEpsilon(epsilon.to_string()))?;
        Ok(Self {
            sector,
            mode,
            eps_minus_inv: epsilon.minus(&inv),
            epsilon,
            epsilon_label: label,
            overrides: BTreeMap::new(),
            table: None,
        })
    }

    pub fn from_table(sector: Sector, table: ProductTable<S>, epsilon_label: String) -> Result<Self, StructureError> {
        for (&(a, b), prod) in table.iter() {
            a.check_sector(sector)?;
            b.check_sector(sector)?;
            for (x, _) in prod.terms() {
                x.check_sector(sector)?;
            }
        }
        Ok(Self {
            sector,
            mode: Mode::TableBacked,
            epsilon: S::zero(),
            eps_minus_inv: S::zero(),
            epsilon_label,
            overrides: BTreeMap::new(),
            table: Some(table),
        })
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn epsilon_label(&self) -> &str {
        &self.epsilon_label
    }

    pub fn table(&self) -> Option<&ProductTable<S>> {
        self.table.as_ref()
    }

    /// Replace one structure constant of a closed-form system.
    pub fn with_override(mut self, key: CoeffKey, value: S) -> Self {
        self.overrides.insert(key, value);
        self
    }

    pub fn has_center(&self) -> bool {
        match self.mode {
            Mode::CenterlessClosedForm => false,
            Mode::CentralClosedForm | Mode::VirasoroClosedForm => true,
            Mode::TableBacked => self.table.as_ref().is_some_and(ProductTable::has_center),
        }
    }

    pub fn has_odd(&self) -> bool {
        match self.mode {
            Mode::VirasoroClosedForm => false,
            Mode::CenterlessClosedForm | Mode::CentralClosedForm => true,
            Mode::TableBacked => self.table.as_ref().is_some_and(ProductTable::has_odd),
        }
    }

    /// Basis vectors of this algebra inside `window`, in canonical order.
    pub fn basis(&self, window: &Window) -> Vec<BasisIndex> {
        let mut out: Vec<BasisIndex> = window.evens().map(BasisIndex::L).collect();
        if self.has_odd() {
            out.extend(window.odds().map(BasisIndex::G));
        }
        if self.has_center() {
            out.push(BasisIndex::C);
        }
        out
    }

    fn lin(&self, a: i64, b: i64) -> S {
        S::from_i64(a).plus(&self.epsilon.times(&S::from_i64(b)))
    }

    fn quotient(&self, num: S, den: S) -> Result<S, StructureError> {
        num.divided(&den).map_err(|_| {
            StructureError::Field(FieldError::Pole {
                denominator: den.to_string(),
                at: self.epsilon_label.clone(),
            })
        })
    }

    fn check_key(&self, key: CoeffKey) -> Result<(), StructureError> {
        for r in key.odd_indices() {
            if !self.sector.admits(r) {
                return Err(StructureError::SectorParity { index: r, sector: self.sector });
            }
        }
        let family = key.family();
        let ok = match self.mode {
            Mode::CenterlessClosedForm => matches!(family, Family::F | Family::G | Family::H | Family::D),
            Mode::CentralClosedForm | Mode::TableBacked => true,
            Mode::VirasoroClosedForm => matches!(family, Family::F | Family::Phi),
        };
        if ok {
            Ok(())
        } else {
            Err(StructureError::Mode(format!("{key} is not defined in {:?}", self.mode)))
        }
    }

    /// Value of one structure constant.
    pub fn coeff(&self, key: CoeffKey) -> Result<S, StructureError> {
        self.check_key(key)?;
        if let Some(v) = self.overrides.get(&key) {
            return Ok(v.clone());
        }
        if let Some(table) = &self.table {
            let (a, b, target) = key
                .location()
                .ok_or_else(|| StructureError::Mode(format!("{key} has no location")))?;
            return table
                .get(a, b)
                .map(|p| p.coeff(&target))
                .ok_or_else(|| StructureError::OutOfWindow(format!("{a}*{b}")));
        }
        self.closed_coeff(key)
    }

    fn closed_coeff(&self, key: CoeffKey) -> Result<S, StructureError> {
        let k24 = S::from_i64(24);
        match key {
            CoeffKey::F(m, n) => {
                if n == 0 {
                    return Ok(S::zero());
                }
                let num = S::from_i64(-n).times(&self.lin(1, n));
                self.quotient(num, self.lin(1, m + n))
            }
            CoeffKey::G(m, r) => {
                let r2 = r.doubled();
                let num = S::from_i64(-(m + r2)).times(&self.lin(1, r2));
                let den = S::from_i64(2).times(&self.lin(1, 2 * m + r2));
                self.quotient(num, den)
            }
            CoeffKey::H(r, m) => {
                if m == 0 {
                    return Ok(S::zero());
                }
                let num = S::from_i64(-m).times(&self.lin(1, m));
                self.quotient(num, self.lin(1, 2 * m + r.doubled()))
            }
            CoeffKey::D(r, s) => {
                let sum = r
                    .sum_int(s)
                    .ok_or(StructureError::SectorParity { index: s, sector: self.sector })?;
                self.quotient(self.lin(1, s.doubled()), self.lin(1, sum))
            }
            CoeffKey::Phi(m, n) => {
                if m + n != 0 {
                    return Ok(S::zero());
                }
                let cubic = S::from_i64(m * m * m - m);
                let num = cubic.plus(&self.eps_minus_inv.times(&S::from_i64(m * m)));
                self.quotient(num, k24)
            }
            CoeffKey::Sigma(r, s) => {
                if r.doubled() + s.doubled() != 0 {
                    return Ok(S::zero());
                }
                let r2 = r.doubled();
                let num = S::from_i64(r2 * r2 - 1).plus(&self.eps_minus_inv.times(&S::from_i64(r2)));
                self.quotient(num, k24)
            }
            CoeffKey::Psi(..) | CoeffKey::Rho(..) => Ok(S::zero()),
        }
    }

    pub fn coeff_f(&self, m: i64, n: i64) -> Result<S, StructureError> {
        self.coeff(CoeffKey::F(m, n))
    }
    pub fn coeff_g(&self, m: i64, r: HalfInt) -> Result<S, StructureError> {
        self.coeff(CoeffKey::G(m, r))
    }
    pub fn coeff_h(&self, r: HalfInt, m: i64) -> Result<S, StructureError> {
        self.coeff(CoeffKey::H(r, m))
    }
    pub fn coeff_d(&self, r: HalfInt, s: HalfInt) -> Result<S, StructureError> {
        self.coeff(CoeffKey::D(r, s))
    }
    pub fn coeff_phi(&self, m: i64, n: i64) -> Result<S, StructureError> {
        self.coeff(CoeffKey::Phi(m, n))
    }
    pub fn coeff_psi(&self, m: i64, r: HalfInt) -> Result<S, StructureError> {
        self.coeff(CoeffKey::Psi(m, r))
    }
    pub fn coeff_rho(&self, r: HalfInt, m: i64) -> Result<S, StructureError> {
        self.coeff(CoeffKey::Rho(r, m))
    }
    pub fn coeff_sigma(&self, r: HalfInt, s: HalfInt) -> Result<S, StructureError> {
        self.coeff(CoeffKey::Sigma(r, s))
    }

    /// Product of two basis vectors.
    pub fn basis_product(&self, a: BasisIndex, b: BasisIndex) -> Result<Element<S>, StructureError> {
        use BasisIndex::*;
        a.check_sector(self.sector)?;
        b.check_sector(self.sector)?;
        if let Some(table) = &self.table {
            return table
                .get(a, b)
                .cloned()
                .ok_or_else(|| StructureError::OutOfWindow(format!("{a}*{b}")));
        }
        let central = self.has_center();
        if (a == C || b == C) && !central {
            return Err(StructureError::Mode(format!("{a}*{b}: no central element in {:?}", self.mode)));
        }
        if !self.has_odd() && (matches!(a, G(_)) || matches!(b, G(_))) {
            return Err(StructureError::Mode(format!("{a}*{b}: no odd part in {:?}", self.mode)));
        }
        let (main, main_key, central_key) = match (a, b) {
            (C, _) | (_, C) => return Ok(Element::zero()),
            (L(m), L(n)) => (L(m + n), CoeffKey::F(m, n), CoeffKey::Phi(m, n)),
            (L(m), G(r)) => (G(r.shift(m)), CoeffKey::G(m, r), CoeffKey::Psi(m, r)),
            (G(r), L(m)) => (G(r.shift(m)), CoeffKey::H(r, m), CoeffKey::Rho(r, m)),
            (G(r), G(s)) => {
                let sum = r
                    .sum_int(s)
                    .ok_or(StructureError::SectorParity { index: s, sector: self.sector })?;
                (L(sum), CoeffKey::D(r, s), CoeffKey::Sigma(r, s))
            }
        };
        let mut out = Element::term(main, self.coeff(main_key)?);
        if central {
            out.add_term(C, self.coeff(central_key)?);
        }
        Ok(out)
    }

    /// Bilinear extension of [`basis_product`](Self::basis_product).
    pub fn multiply(&self, x: &Element<S>, y: &Element<S>) -> Result<Element<S>, StructureError> {
        let mut out = Element::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let p = self.basis_product(*a, *b)?;
                out.add_scaled(&p, &ca.times(cb));
            }
        }
        Ok(out)
    }

    /// `x*y - (-1)^(|x||y|) y*x` for parity-homogeneous `x`, `y`.
    pub fn super_commutator(&self, x: &Element<S>, y: &Element<S>) -> Result<Element<S>, StructureError> {
        let (Some(px), Some(py)) = (x.parity()?, y.parity()?) else {
            return Ok(Element::zero());
        };
        let xy = self.multiply(x, y)?;
        let yx = self.multiply(y, x)?;
        Ok(if px.koszul_negative(py) {
            xy.plus(&yx)
        } else {
            xy.minus(&yx)
        })
    }

    /// `(x*y)*z - x*(y*z)`
    pub fn associator(&self, x: &Element<S>, y: &Element<S>, z: &Element<S>) -> Result<Element<S>, StructureError> {
        let left = self.multiply(&self.multiply(x, y)?, z)?;
        let right = self.multiply(x, &self.multiply(y, z)?)?;
        Ok(left.minus(&right))
    }

    /// Every basis product with both factors in `window`.
    pub fn product_table(&self, window: &Window) -> Result<ProductTable<S>, StructureError> {
        let basis = self.basis(window);
        let mut table = ProductTable::default();
        for &a in &basis {
            for &b in &basis {
                table.insert(a, b, self.basis_product(a, b)?);
            }
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BasisIndex::*;

    fn rf(s: &str) -> RatFun {
        s.parse().unwrap()
    }

    fn h(d: i64) -> HalfInt {
        HalfInt::from_doubled(d)
    }

    fn ns() -> StructureSystem<RatFun> {
        StructureSystem::symbolic(Sector::NeveuSchwarz, Mode::CentralClosedForm)
    }

    fn ramond() -> StructureSystem<RatFun> {
        StructureSystem::symbolic(Sector::Ramond, Mode::CentralClosedForm)
    }

    #[test]
    fn coeff_f_examples() {
        let s = ns();
        assert!(s.coeff_f(2, 0).unwrap().is_zero());
        for n in -5..=5 {
            assert_eq!(s.coeff_f(0, n).unwrap(), RatFun::from_i64(-n));
        }
        assert_eq!(s.coeff_f(1, -1).unwrap(), rf("1 - e"));
    }

    #[test]
    fn coeff_ghd_examples() {
        let s = ns();
        for k in -9..=9 {
            assert!(s.coeff_d(h(2 * k + 1), h(2 * k + 1)).unwrap().is_one());
        }
        assert_eq!(s.coeff_g(1, h(1)).unwrap(), rf("-(1+e)/(1+3*e)"));
        for r in [-3, -1, 1, 5] {
            assert!(s.coeff_h(h(r), 0).unwrap().is_zero());
        }
        assert!(matches!(s.coeff_g(1, h(2)), Err(StructureError::SectorParity { .. })));
        assert!(matches!(ramond().coeff_d(h(1), h(1)), Err(StructureError::SectorParity { .. })));
    }

    #[test]
    fn cocycle_examples() {
        let s = ns();
        assert!(s.coeff_phi(2, 3).unwrap().is_zero());
        assert_eq!(s.coeff_phi(1, -1).unwrap(), rf("(e^2-1)/(24*e)"));
        assert_eq!(s.coeff_sigma(h(1), h(-1)).unwrap(), rf("(e^2-1)/(24*e)"));
        assert_eq!(ramond().coeff_sigma(h(0), h(0)).unwrap(), RatFun::from_ratio(-1, 24));
        assert!(s.coeff_psi(3, h(1)).unwrap().is_zero());
        let centerless = StructureSystem::symbolic(Sector::NeveuSchwarz, Mode::CenterlessClosedForm);
        assert!(matches!(centerless.coeff_phi(1, -1), Err(StructureError::Mode(_))));
    }

    #[test]
    fn multiply_examples() {
        let s = ns();
        let p = s.basis_product(L(1), L(-1)).unwrap();
        let expected = Element::from_terms([(L(0), rf("1-e")), (C, rf("(e^2-1)/(24*e)"))]);
        assert_eq!(p, expected);
        assert!(s.basis_product(C, L(5)).unwrap().is_zero());
        assert_eq!(s.basis_product(G(h(1)), G(h(1))).unwrap(), Element::basis(L(1)));
    }

    #[test]
    fn commutator_examples() {
        let s = ns();
        let b = |x| Element::<RatFun>::basis(x);
        assert_eq!(
            s.super_commutator(&b(L(1)), &b(L(-1))).unwrap(),
            Element::term(L(0), RatFun::from_i64(2))
        );
        assert_eq!(
            s.super_commutator(&b(G(h(1))), &b(G(h(3)))).unwrap(),
            Element::term(L(2), RatFun::from_i64(2))
        );
        assert!(s.super_commutator(&b(C), &b(G(h(1)))).unwrap().is_zero());
        let mixed = b(L(1)).plus(&b(G(h(1))));
        assert!(s.super_commutator(&mixed, &b(L(0))).is_err());
    }

    #[test]
    fn associator_examples() {
        let s = ns();
        let b = |x| Element::<RatFun>::basis(x);
        assert!(s.associator(&b(C), &b(L(2)), &b(L(3))).unwrap().is_zero());
        assert!(s.associator(&b(L(0)), &b(L(0)), &b(L(0))).unwrap().is_zero());
        let a123 = s.associator(&b(L(1)), &b(L(2)), &b(L(3))).unwrap();
        let a213 = s.associator(&b(L(2)), &b(L(1)), &b(L(3))).unwrap();
        assert!(!a123.is_zero());
        assert_eq!(a123, a213);
    }

    #[test]
    fn table_lookups_fail_outside() {
        let s = ns();
        let table = s.product_table(&Window::new(1, Sector::NeveuSchwarz)).unwrap();
        let t = StructureSystem::from_table(Sector::NeveuSchwarz, table, "symbolic".into()).unwrap();
        assert_eq!(t.coeff_f(1, -1).unwrap(), rf("1-e"));
        assert!(matches!(t.basis_product(L(2), L(0)), Err(StructureError::OutOfWindow(_))));
        assert!(matches!(t.coeff_f(2, 0), Err(StructureError::OutOfWindow(_))));
        assert!(t.has_center() && t.has_odd());
    }

    #[test]
    fn numeric_rejects_integer_inverse() {
        let bad = StructureSystem::numeric(Sector::Ramond, Mode::CentralClosedForm, "1/2".parse().unwrap());
        assert!(matches!(bad, Err(StructureError::InadmissibleEpsilon(_))));
        assert!(StructureSystem::numeric(Sector::Ramond, Mode::CentralClosedForm, "3/5".parse().unwrap()).is_ok());
    }

    #[test]
    fn overrides_replace_single_constants() {
        let s = ns().with_override(CoeffKey::D(h(1), h(1)), RatFun::from_i64(2));
        assert_eq!(s.coeff_d(h(1), h(1)).unwrap(), RatFun::from_i64(2));
        assert!(s.coeff_d(h(3), h(3)).unwrap().is_one());
    }
}
