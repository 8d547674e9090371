use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::parse::parse_expression;
use super::poly::{poly_gcd, IntPoly};
use super::{FieldError, GaussianRational, Scalar};

/// Element of Q(e) in canonical form.
///
/// Canonical means: numerator and denominator are coprime over Q, the pair has
/// integer content 1, the denominator has positive leading coefficient and
/// zero is `0/1`. Two values are equal iff their canonical forms are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: IntPoly,
    den: IntPoly,
}

impl RatFun {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, FieldError> {
        rf_normalize(num, den)
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Self::canonical(p, IntPoly::one())
    }

    pub fn epsilon() -> Self {
        Self::from_poly(IntPoly::variable())
    }

    /// `a + b*e`
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_poly(IntPoly::linear(a, b))
    }

    pub fn numer(&self) -> &IntPoly {
        &self.num
    }

    pub fn denom(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    fn canonical(num: IntPoly, den: IntPoly) -> Self {
        rf_normalize(num, den).expect("nonzero denominator")
    }

    /// Exact square root in Q(e), if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        // sqrt(p/q) = sqrt(p*q)/q
        let pq = self.num.mul(&self.den);
        let root = pq.sqrt()?;
        Some(Self::canonical(root, self.den.clone()))
    }

    /// Value at `e = at`; fails when the denominator vanishes there.
    pub fn eval(&self, at: &GaussianRational) -> Result<GaussianRational, FieldError> {
        rf_eval(self, at)
    }
}

/// Reduce `num/den` to canonical form.
pub fn rf_normalize(num: IntPoly, den: IntPoly) -> Result<RatFun, FieldError> {
    if den.is_zero() {
        return Err(FieldError::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(RatFun {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        });
    }
    let (mut num, mut den) = (num, den);
    if !den.is_constant() && !num.is_constant() {
        let g = poly_gcd(&num, &den);
        if !g.is_constant() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
    }
    let mut c = num.content().gcd(&den.content());
    if den.leading().is_some_and(Signed::is_negative) {
        c = -c;
    }
    if !c.is_one() {
        num = num.div_scalar_exact(&c);
        den = den.div_scalar_exact(&c);
    }
    Ok(RatFun { num, den })
}

pub fn rf_add(a: &RatFun, b: &RatFun) -> RatFun {
    if a.num.is_zero() {
        return b.clone();
    }
    if b.num.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        return RatFun::canonical(a.num.add(&b.num), a.den.clone());
    }
    RatFun::canonical(
        a.num.mul(&b.den).add(&b.num.mul(&a.den)),
        a.den.mul(&b.den),
    )
}

pub fn rf_neg(a: &RatFun) -> RatFun {
    RatFun {
        num: a.num.neg(),
        den: a.den.clone(),
    }
}

pub fn rf_sub(a: &RatFun, b: &RatFun) -> RatFun {
    rf_add(a, &rf_neg(b))
}

pub fn rf_mul(a: &RatFun, b: &RatFun) -> RatFun {
    if a.num.is_zero() || b.num.is_zero() {
        return RatFun::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return RatFun {
            num: a.num.mul(&b.num),
            den: IntPoly::one(),
        };
    }
    RatFun::canonical(a.num.mul(&b.num), a.den.mul(&b.den))
}

pub fn rf_inv(a: &RatFun) -> Result<RatFun, FieldError> {
    if a.num.is_zero() {
        return Err(FieldError::DivisionByZero);
    }
    rf_normalize(a.den.clone(), a.num.clone())
}

/// Evaluate at a Gaussian rational point.
pub fn rf_eval(x: &RatFun, at: &GaussianRational) -> Result<GaussianRational, FieldError> {
    let ev = |p: &IntPoly| {
        p.eval_with(
            at,
            |c| GaussianRational::from_bigint(c.clone()),
            |a, b| a.plus(b),
            |a, b| a.times(b),
        )
    };
    let d = ev(&x.den);
    if d.is_zero() {
        return Err(FieldError::Pole {
            denominator: x.den.to_string(),
            at: at.to_string(),
        });
    }
    ev(&x.num).divided(&d)
}

impl Scalar for RatFun {
    fn zero() -> Self {
        RatFun {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    fn one() -> Self {
        RatFun {
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    fn from_i64(v: i64) -> Self {
        RatFun {
            num: IntPoly::constant(v),
            den: IntPoly::one(),
        }
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::canonical(IntPoly::constant(n), IntPoly::constant(d))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        rf_add(self, rhs)
    }

    fn minus(&self, rhs: &Self) -> Self {
        rf_sub(self, rhs)
    }

    fn times(&self, rhs: &Self) -> Self {
        rf_mul(self, rhs)
    }

    fn negated(&self) -> Self {
        rf_neg(self)
    }

    fn inverse(&self) -> Result<Self, FieldError> {
        rf_inv(self)
    }

    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn parse_exact(s: &str) -> Result<Self, FieldError> {
        parse_expression(
            s,
            |n: &BigInt| RatFun::from_poly(IntPoly::constant(n.clone())),
            |name| matches!(name, "e" | "ε" | "eps" | "epsilon").then(RatFun::epsilon),
        )
    }
}

impl FromStr for RatFun {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_exact(s)
    }
}

impl Default for RatFun {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for RatFun {
    /// `"(e^2 - 1)/(24*e)"`, `"-3"`, `"1/2"`, `"(3*e + 1)"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_constant() {
            write!(f, "{}", self.num.constant_term())?;
        } else {
            write!(f, "({})", self.num)?;
        }
        if self.den.is_one() {
            Ok(())
        } else if self.den.is_constant() {
            write!(f, "/{}", self.den.constant_term())
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun[{self}]")
    }
}

impl From<i64> for RatFun {
    fn from(v: i64) -> Self {
        Self::from_i64(v)
    }
}

impl From<BigInt> for RatFun {
    fn from(v: BigInt) -> Self {
        Self::from_poly(IntPoly::constant(v))
    }
}

macro_rules! ratfun_binop {
    ($tr:ident, $m:ident, $f:path) => {
        impl $tr<&RatFun> for &RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun {
                $f(self, rhs)
            }
        }
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                $f(&self, &rhs)
            }
        }
    };
}

ratfun_binop!(Add, add, rf_add);
ratfun_binop!(Sub, sub, rf_sub);
ratfun_binop!(Mul, mul, rf_mul);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        rf_neg(&self)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        rf_neg(self)
    }
}
