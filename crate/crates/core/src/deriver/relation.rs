//! Instances of the constraint equations as sparse polynomials in table unknowns.

use std::collections::BTreeMap;
use std::fmt;

use crate::checker::IndexValue;
use crate::exactfield::{RatFun, Scalar};
use crate::structures::{BasisIndex, HalfInt, Mode, Sector, StructureSystem, Window};

/// A table entry the derivation solves for.
///
/// `G, H, D` are the normalised centerless constants; `Sigma, Psi, Rho` the
/// cocycle values on odd-odd, even-odd and odd-even pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unknown {
    G(i64, HalfInt),
    H(HalfInt, i64),
    D(HalfInt, HalfInt),
    Sigma(HalfInt, HalfInt),
    Psi(i64, HalfInt),
    Rho(HalfInt, i64),
}

impl Unknown {
    pub fn in_window(self, w: &Window) -> bool {
        match self {
            Unknown::G(m, r) | Unknown::H(r, m) | Unknown::Psi(m, r) | Unknown::Rho(r, m) => {
                w.contains_even(m) && w.contains_odd(r)
            }
            Unknown::D(r, s) | Unknown::Sigma(r, s) => w.contains_odd(r) && w.contains_odd(s),
        }
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unknown::G(m, r) => write!(f, "G({m},{r})"),
            Unknown::H(r, m) => write!(f, "H({r},{m})"),
            Unknown::D(r, s) => write!(f, "D({r},{s})"),
            Unknown::Sigma(r, s) => write!(f, "sigma({r},{s})"),
            Unknown::Psi(m, r) => write!(f, "psi({m},{r})"),
            Unknown::Rho(r, m) => write!(f, "rho({r},{m})"),
        }
    }
}

/// Equation families. Centerless ones are in the normalised unknowns; the
/// cocycle ones take `f, g, h, d, phi` from the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    ClosureGh,
    ClosureDd,
    AssocLLG,
    AssocLGL,
    AssocLGG,
    AssocGGL,
    AssocGGG,
    ClosureSigma,
    ClosurePsiRho,
    BFormLLL,
    BFormLLG,
    BFormLGL,
    BFormLGG,
    BFormGGL,
    BFormGGG,
}

impl Relation {
    pub const CENTERLESS: [Relation; 7] = [
        Relation::ClosureGh,
        Relation::ClosureDd,
        Relation::AssocLLG,
        Relation::AssocLGL,
        Relation::AssocLGG,
        Relation::AssocGGL,
        Relation::AssocGGG,
    ];

    pub const CENTRAL: [Relation; 8] = [
        Relation::ClosureSigma,
        Relation::ClosurePsiRho,
        Relation::BFormLLL,
        Relation::BFormLLG,
        Relation::BFormLGL,
        Relation::BFormLGG,
        Relation::BFormGGL,
        Relation::BFormGGG,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Relation::ClosureGh => "closure-gh",
            Relation::ClosureDd => "closure-dd",
            Relation::AssocLLG => "assoc-LLG",
            Relation::AssocLGL => "assoc-LGL",
            Relation::AssocLGG => "assoc-LGG",
            Relation::AssocGGL => "assoc-GGL",
            Relation::AssocGGG => "assoc-GGG",
            Relation::ClosureSigma => "closure-sigma",
            Relation::ClosurePsiRho => "closure-psi-rho",
            Relation::BFormLLL => "b-form-LLL",
            Relation::BFormLLG => "b-form-LLG",
            Relation::BFormLGL => "b-form-LGL",
            Relation::BFormLGG => "b-form-LGG",
            Relation::BFormGGL => "b-form-GGL",
            Relation::BFormGGG => "b-form-GGG",
        }
    }

    /// Index names; `m, n, l` are even and `r, s, t` odd.
    pub fn index_names(self) -> &'static [&'static str] {
        match self {
            Relation::ClosureGh | Relation::ClosurePsiRho => &["m", "r"],
            Relation::ClosureDd | Relation::ClosureSigma => &["r", "s"],
            Relation::AssocLLG | Relation::BFormLLG => &["m", "n", "r"],
            Relation::AssocLGL | Relation::BFormLGL => &["m", "r", "n"],
            Relation::AssocLGG | Relation::BFormLGG => &["m", "r", "s"],
            Relation::AssocGGL | Relation::BFormGGL => &["r", "s", "m"],
            Relation::AssocGGG | Relation::BFormGGG => &["r", "s", "t"],
            Relation::BFormLLL => &["m", "n", "l"],
        }
    }

    fn odd_mask(self) -> &'static [bool] {
        match self {
            Relation::ClosureGh | Relation::ClosurePsiRho => &[false, true],
            Relation::ClosureDd | Relation::ClosureSigma => &[true, true],
            Relation::AssocLLG | Relation::BFormLLG => &[false, false, true],
            Relation::AssocLGL | Relation::BFormLGL => &[false, true, false],
            Relation::AssocLGG | Relation::BFormLGG => &[false, true, true],
            Relation::AssocGGL | Relation::BFormGGL => &[true, true, false],
            Relation::AssocGGG | Relation::BFormGGG => &[true, true, true],
            Relation::BFormLLL => &[false, false, false],
        }
    }

    /// Every choice of indices with all index values in the window.
    pub fn index_box(self, w: &Window) -> Vec<Vec<IndexValue>> {
        let evens: Vec<IndexValue> = w.evens().map(IndexValue::Int).collect();
        let odds: Vec<IndexValue> = w.odds().map(IndexValue::Half).collect();
        let mut out: Vec<Vec<IndexValue>> = vec![Vec::new()];
        for &odd in self.odd_mask() {
            let pool = if odd { &odds } else { &evens };
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    pool.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(*v);
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn parse(id: &str) -> Option<Self> {
        Self::CENTERLESS
            .iter()
            .chain(Self::CENTRAL.iter())
            .copied()
            .find(|r| r.id() == id)
    }
}

/// `coeff * product(factors)`, factors sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: RatFun,
    pub factors: Vec<Unknown>,
}

/// One instantiated equation `sum(terms) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub relation: Relation,
    pub args: Vec<IndexValue>,
    pub terms: Vec<Term>,
}

impl Instance {
    pub fn unknowns(&self) -> impl Iterator<Item = Unknown> + '_ {
        self.terms.iter().flat_map(|t| t.factors.iter().copied())
    }

    pub fn in_window(&self, w: &Window) -> bool {
        self.unknowns().all(|u| u.in_window(w))
    }

    pub fn named_args(&self) -> Vec<(&'static str, IndexValue)> {
        self.relation
            .index_names()
            .iter()
            .copied()
            .zip(self.args.iter().copied())
            .collect()
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.relation.id())?;
        for (i, (k, v)) in self.named_args().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ")")
    }
}

/// Collects terms, merging equal monomials and dropping zeros.
struct TermSum {
    terms: BTreeMap<Vec<Unknown>, RatFun>,
}

impl TermSum {
    fn new() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    fn add(&mut self, coeff: RatFun, mut factors: Vec<Unknown>) -> &mut Self {
        if coeff.is_zero() {
            return self;
        }
        factors.sort();
        let slot = self.terms.entry(factors).or_insert_with(RatFun::zero);
        *slot = slot.plus(&coeff);
        self
    }

    fn finish(self, relation: Relation, args: Vec<IndexValue>) -> Instance {
        Instance {
            relation,
            args,
            terms: self
                .terms
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(factors, coeff)| Term { coeff, factors })
                .collect(),
        }
    }
}

fn lin(a: i64, b: i64) -> RatFun {
    RatFun::linear(a, b)
}

fn int(v: i64) -> RatFun {
    RatFun::from_i64(v)
}

/// `m/2 - r`
fn half_diff(m: i64, r: HalfInt) -> RatFun {
    RatFun::from_ratio(m - r.doubled(), 2)
}

fn ev(v: IndexValue) -> i64 {
    match v {
        IndexValue::Int(m) => m,
        other => panic!("expected an even index, got {other}"),
    }
}

fn od(v: IndexValue) -> HalfInt {
    match v {
        IndexValue::Half(r) => r,
        other => panic!("expected an odd index, got {other}"),
    }
}

/// Builds instances; owns the closed-form data the cocycle relations need.
pub struct Builder {
    sector: Sector,
    centerless: StructureSystem<RatFun>,
    central: StructureSystem<RatFun>,
}

impl Builder {
    pub fn new(sector: Sector) -> Self {
        Self {
            sector,
            centerless: StructureSystem::symbolic(sector, Mode::CenterlessClosedForm),
            central: StructureSystem::symbolic(sector, Mode::CentralClosedForm),
        }
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn build(&self, relation: Relation, args: &[IndexValue]) -> Instance {
        use Unknown::*;
        let mut t = TermSum::new();
        let a = args.to_vec();
        match relation {
            Relation::ClosureGh => {
                let (m, r) = (ev(a[0]), od(a[1]));
                // G(m,r)(1+2er) - H(r,m)(1+em) = (m/2-r)(1+2e(m+r))
                t.add(lin(1, r.doubled()), vec![G(m, r)])
                    .add(lin(1, m).negated(), vec![H(r, m)])
                    .add(half_diff(m, r).times(&lin(1, 2 * m + r.doubled())).negated(), vec![]);
            }
            Relation::ClosureDd => {
                let (r, s) = (od(a[0]), od(a[1]));
                // D(r,s)(1+2es) + D(s,r)(1+2er) = 2 + 2e(r+s)
                t.add(lin(1, s.doubled()), vec![D(r, s)])
                    .add(lin(1, r.doubled()), vec![D(s, r)])
                    .add(lin(2, r.doubled() + s.doubled()).negated(), vec![]);
            }
            Relation::AssocLLG => {
                let (m, n, r) = (ev(a[0]), ev(a[1]), od(a[2]));
                // (m-n)G(m+n,r) = G(n,r)G(m,n+r) - G(m,r)G(n,m+r)
                t.add(int(m - n), vec![G(m + n, r)])
                    .add(int(-1), vec![G(n, r), G(m, r.shift(n))])
                    .add(int(1), vec![G(m, r), G(n, r.shift(m))]);
            }
            Relation::AssocLGL => {
                let (m, r, n) = (ev(a[0]), od(a[1]), ev(a[2]));
                // (m/2-r)H(m+r,n) = H(r,n)G(m,n+r) + nH(r,m+n)
                t.add(half_diff(m, r), vec![H(r.shift(m), n)])
                    .add(int(-1), vec![H(r, n), G(m, r.shift(n))])
                    .add(int(-n), vec![H(r, m + n)]);
            }
            Relation::AssocLGG => {
                let (m, r, s) = (ev(a[0]), od(a[1]), od(a[2]));
                // (m/2-r)D(m+r,s) = -(r+s)D(r,s) - G(m,s)D(r,m+s)
                let rs = RatFun::from_ratio(r.doubled() + s.doubled(), 2);
                t.add(half_diff(m, r), vec![D(r.shift(m), s)])
                    .add(rs, vec![D(r, s)])
                    .add(int(1), vec![G(m, s), D(r, s.shift(m))]);
            }
            Relation::AssocGGL => {
                let (r, s, m) = (od(a[0]), od(a[1]), ev(a[2]));
                // -2m = H(s,m)D(r,m+s) + H(r,m)D(s,m+r)
                t.add(int(2 * m), vec![])
                    .add(int(1), vec![H(s, m), D(r, s.shift(m))])
                    .add(int(1), vec![H(r, m), D(s, r.shift(m))]);
            }
            Relation::AssocGGG => {
                let (r, s, tt) = (od(a[0]), od(a[1]), od(a[2]));
                let rs = r.sum_int(s).expect("odd indices of one sector");
                // 2G(r+s,t) = D(s,t)H(r,s+t) + D(r,t)H(s,r+t)
                t.add(int(2), vec![G(rs, tt)])
                    .add(int(-1), vec![D(s, tt), H(r, s.sum_int(tt).expect("sector"))])
                    .add(int(-1), vec![D(r, tt), H(s, r.sum_int(tt).expect("sector"))]);
            }
            Relation::ClosureSigma => {
                let (r, s) = (od(a[0]), od(a[1]));
                let r2 = r.doubled();
                t.add(int(1), vec![Sigma(r, s)]).add(int(1), vec![Sigma(s, r)]);
                if r2 + s.doubled() == 0 {
                    t.add(RatFun::from_ratio(r2 * r2 - 1, 12).negated(), vec![]);
                }
            }
            Relation::ClosurePsiRho => {
                let (m, r) = (ev(a[0]), od(a[1]));
                t.add(int(1), vec![Psi(m, r)]).add(int(-1), vec![Rho(r, m)]);
            }
            Relation::BFormLLL
            | Relation::BFormLLG
            | Relation::BFormLGL
            | Relation::BFormLGG
            | Relation::BFormGGL
            | Relation::BFormGGG => {
                let basis: Vec<BasisIndex> = a
                    .iter()
                    .map(|v| match *v {
                        IndexValue::Int(m) => BasisIndex::L(m),
                        IndexValue::Half(r) => BasisIndex::G(r),
                        IndexValue::Basis(b) => b,
                    })
                    .collect();
                self.b_form(&mut t, basis[0], basis[1], basis[2]);
            }
        }
        t.finish(relation, a)
    }

    /// `omega(u, v)` as a single term: a constant for two even vectors, else an unknown.
    fn omega(&self, t: &mut TermSum, k: RatFun, u: BasisIndex, v: BasisIndex) {
        use BasisIndex::*;
        match (u, v) {
            (L(m), L(n)) => {
                let phi = self.central.coeff_phi(m, n).expect("closed form");
                t.add(k.times(&phi), vec![]);
            }
            (L(m), G(r)) => {
                t.add(k, vec![Unknown::Psi(m, r)]);
            }
            (G(r), L(m)) => {
                t.add(k, vec![Unknown::Rho(r, m)]);
            }
            (G(r), G(s)) => {
                t.add(k, vec![Unknown::Sigma(r, s)]);
            }
            _ => unreachable!("no central vector in a centerless product"),
        }
    }

    /// `B(x,y,z) - (-1)^(|x||y|) B(y,x,z)` with `B(x,y,z) = omega(x*y, z) - omega(x, y*z)`.
    fn b_form(&self, t: &mut TermSum, x: BasisIndex, y: BasisIndex, z: BasisIndex) {
        let sign = if x.parity().koszul_negative(y.parity()) { int(-1) } else { int(1) };
        for (p, q, k) in [(x, y, int(1)), (y, x, sign.negated())] {
            let pq = self.centerless.basis_product(p, q).expect("closed form");
            for (u, c) in pq.terms() {
                self.omega(t, c.times(&k), *u, z);
            }
            let qz = self.centerless.basis_product(q, z).expect("closed form");
            for (v, c) in qz.terms() {
                self.omega(t, c.times(&k).negated(), p, *v);
            }
        }
    }
}

/// `G_r * G_r` relation at `(r, r, m)`: `-m = H(r,m) D(r,m+r)`.
pub fn h_from_d(r: HalfInt, m: i64) -> Vec<IndexValue> {
    vec![IndexValue::Half(r), IndexValue::Half(r), IndexValue::Int(m)]
}

pub fn args2_em(m: i64, r: HalfInt) -> Vec<IndexValue> {
    vec![IndexValue::Int(m), IndexValue::Half(r)]
}

pub fn args2_oo(r: HalfInt, s: HalfInt) -> Vec<IndexValue> {
    vec![IndexValue::Half(r), IndexValue::Half(s)]
}

pub fn args_eeo(m: i64, n: i64, r: HalfInt) -> Vec<IndexValue> {
    vec![IndexValue::Int(m), IndexValue::Int(n), IndexValue::Half(r)]
}

pub fn args_eoe(m: i64, r: HalfInt, n: i64) -> Vec<IndexValue> {
    vec![IndexValue::Int(m), IndexValue::Half(r), IndexValue::Int(n)]
}

pub fn args_eoo(m: i64, r: HalfInt, s: HalfInt) -> Vec<IndexValue> {
    vec![IndexValue::Int(m), IndexValue::Half(r), IndexValue::Half(s)]
}

pub fn args_ooe(r: HalfInt, s: HalfInt, m: i64) -> Vec<IndexValue> {
    vec![IndexValue::Half(r), IndexValue::Half(s), IndexValue::Int(m)]
}

pub fn args_ooo(r: HalfInt, s: HalfInt, t: HalfInt) -> Vec<IndexValue> {
    vec![IndexValue::Half(r), IndexValue::Half(s), IndexValue::Half(t)]
}
