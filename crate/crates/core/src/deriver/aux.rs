//! Rational functions in one auxiliary unknown `x` over Q(e), used while a
//! derivation step carries an undetermined table entry symbolically.

use std::fmt;

use crate::exactfield::{RatFun, Scalar};

/// Polynomial in `x` with Q(e) coefficients, lowest degree first, trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<RatFun>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: RatFun) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![RatFun::zero(), RatFun::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<RatFun>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn lead(&self) -> RatFun {
        self.coeffs.last().cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i).plus(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.negated()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &RatFun) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.times(k)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![RatFun::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::from_coeffs(out)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().inverse().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut q = vec![RatFun::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let k = rem.lead().times(&inv);
            q[rd - dd] = k.clone();
            let mut shifted = vec![RatFun::zero(); rd - dd];
            shifted.extend(d.coeffs.iter().map(|c| c.times(&k)));
            rem = rem.sub(&Self::from_coeffs(shifted));
        }
        (Self::from_coeffs(q), rem)
    }

    pub fn monic(&self) -> Self {
        match self.lead().inverse() {
            Ok(inv) => self.scale(&inv),
            Err(_) => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, at: &RatFun) -> RatFun {
        self.coeffs
            .iter()
            .rev()
            .fold(RatFun::zero(), |acc, c| acc.times(at).plus(c))
    }

    /// Roots in Q(e), without multiplicity. `None` when some root may lie outside Q(e).
    pub fn roots(&self) -> Option<Vec<RatFun>> {
        let mut p = self.clone();
        let mut roots = Vec::new();
        if p.is_zero() {
            return None;
        }
        if p.coeff(0).is_zero() {
            roots.push(RatFun::zero());
            while p.coeff(0).is_zero() {
                p = Self::from_coeffs(p.coeffs[1..].to_vec());
            }
        }
        match p.degree()? {
            0 => {}
            1 => roots.push(p.coeff(0).negated().divided(&p.coeff(1)).ok()?),
            2 => {
                let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
                let disc = b.times(&b).minus(&RatFun::from_i64(4).times(&a).times(&c));
                let root = disc.sqrt()?;
                let two_a = RatFun::from_i64(2).times(&a);
                for sign in [RatFun::one(), RatFun::from_i64(-1)] {
                    let r = b.negated().plus(&sign.times(&root)).divided(&two_a).ok()?;
                    if !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
            _ => return None,
        }
        Some(roots)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// `num/den` in Q(e)(x), reduced, with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AuxValue {
    num: UniPoly,
    den: UniPoly,
}

impl AuxValue {
    pub fn constant(c: RatFun) -> Self {
        Self {
            num: UniPoly::constant(c),
            den: UniPoly::constant(RatFun::one()),
        }
    }

    pub fn zero() -> Self {
        Self::constant(RatFun::zero())
    }

    pub fn var() -> Self {
        Self {
            num: UniPoly::x(),
            den: UniPoly::constant(RatFun::one()),
        }
    }

    fn reduce(num: UniPoly, den: UniPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = UniPoly::gcd(&num, &den);
        let (num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let inv = den.lead().inverse().expect("nonzero denominator");
        Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn as_constant(&self) -> Option<RatFun> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn plus(&self, o: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.as_constant(), o.as_constant()) {
            return Self::constant(a.plus(&b));
        }
        Self::reduce(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn negated(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    pub fn times(&self, o: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.as_constant(), o.as_constant()) {
            return Self::constant(a.times(&b));
        }
        Self::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scaled(&self, k: &RatFun) -> Self {
        self.times(&Self::constant(k.clone()))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn divided(&self, o: &Self) -> Option<Self> {
        Some(self.times(&o.inverse()?))
    }

    /// Value at `x = at`; `None` at a pole.
    pub fn eval(&self, at: &RatFun) -> Option<RatFun> {
        self.num.eval(at).divided(&self.den.eval(at)).ok()
    }
}

impl fmt::Display for AuxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_constant() {
            return write!(f, "{c}");
        }
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RatFun {
        s.parse().unwrap()
    }

    #[test]
    fn quadratic_roots() {
        // (1+2e) x^2 - (2+3e) x + (1+e) with roots 1 and (1+e)/(1+2e)
        let p = UniPoly::from_coeffs(vec![rf("1+e"), rf("-(2+3*e)"), rf("1+2*e")]);
        let roots = p.roots().unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&RatFun::one()));
        assert!(roots.contains(&rf("(1+e)/(1+2*e)")));
        for r in roots {
            assert!(p.eval(&r).is_zero());
        }
        // x^2 - e has no root in Q(e)
        let q = UniPoly::from_coeffs(vec![rf("-e"), RatFun::zero(), RatFun::one()]);
        assert!(q.roots().is_none());
    }

    #[test]
    fn fractions_reduce() {
        let x = AuxValue::var();
        let one = AuxValue::constant(RatFun::one());
        let a = x.times(&x).minus(&one).divided(&x.minus(&one)).unwrap();
        assert_eq!(a, x.plus(&one));
        assert_eq!(a.eval(&rf("e")).unwrap(), rf("e+1"));
        let b = one.divided(&x).unwrap();
        assert!(b.eval(&RatFun::zero()).is_none());
        assert_eq!(b.times(&x).as_constant(), Some(RatFun::one()));
    }

    #[test]
    fn gcd_is_monic() {
        let x = UniPoly::x();
        let one = UniPoly::constant(RatFun::one());
        let a = x.sub(&one).mul(&x.scale(&rf("e")));
        let b = x.sub(&one).scale(&rf("3"));
        assert_eq!(UniPoly::gcd(&a, &b), x.sub(&one));
    }
}
