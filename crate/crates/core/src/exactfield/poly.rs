//! Dense univariate polynomials in `e` with arbitrary-precision integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer polynomial, coefficients stored lowest degree first.
///
/// The coefficient vector never carries trailing zeros, so the zero polynomial
/// is the empty vector and `degree == len - 1` otherwise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// The polynomial `e`.
    pub fn variable() -> Self {
        Self::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `a + b*e`
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_i64s(&[a, b])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Constant term, zero for the zero polynomial.
    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = rhs.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiply by `e^k`.
    fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Non-negative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide every coefficient by `k`, which must divide all of them.
    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    /// Pseudo-remainder of `self` by a nonzero `divisor`.
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        let db = divisor.degree().expect("pseudo_rem by zero polynomial");
        let lb = divisor.leading().unwrap();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().unwrap().clone();
            r = r.scale(lb).sub(&divisor.scale(&lr).shift(dr - db));
        }
        r
    }

    /// Exact quotient over the integers, `None` when `divisor` does not divide `self` in Z[e].
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let db = divisor.degree()?;
        let lb = divisor.leading().unwrap();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(db).max(1)];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let (quot, rem) = r.leading().unwrap().div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            let term = Self::constant(quot.clone()).shift(dr - db);
            q[dr - db] = quot;
            r = r.sub(&divisor.mul(&term));
        }
        Some(Self::from_coeffs(q))
    }

    /// Horner evaluation in any ring that embeds the integers.
    pub fn eval_with<T, FI, FA, FM>(&self, at: &T, from_int: FI, add: FA, mul: FM) -> T
    where
        FI: Fn(&BigInt) -> T,
        FA: Fn(&T, &T) -> T,
        FM: Fn(&T, &T) -> T,
    {
        let mut acc = from_int(&BigInt::zero());
        for c in self.coeffs.iter().rev() {
            acc = add(&mul(&acc, at), &from_int(c));
        }
        acc
    }

    /// Integer square root, if `self` is the square of an integer polynomial
    /// with positive leading coefficient.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let deg = self.degree()?;
        if deg % 2 != 0 {
            return None;
        }
        let lead = self.leading()?;
        if lead.is_negative() {
            return None;
        }
        let lroot = lead.sqrt();
        if &(&lroot * &lroot) != lead {
            return None;
        }
        // Solve for the root coefficients from the top down.
        let half = deg / 2;
        let mut root = vec![BigInt::zero(); half + 1];
        root[half] = lroot.clone();
        let two_lead = &lroot * 2;
        for k in (0..half).rev() {
            // coefficient of e^(half + k) in root^2 determines root[k]
            let target = &self.coeffs[half + k];
            let mut acc = BigInt::zero();
            for i in (k + 1)..=half {
                let j = half + k - i;
                if j > half || j <= k {
                    continue;
                }
                acc += &root[i] * &root[j];
            }
            let rem = target - acc;
            let (q, r) = rem.div_rem(&two_lead);
            if !r.is_zero() {
                return None;
            }
            root[k] = q;
        }
        let root = Self::from_coeffs(root);
        (root.mul(&root) == *self).then_some(root)
    }
}

/// Greatest common divisor over Q, returned primitive with positive leading coefficient.
pub fn poly_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let (mut x, mut y) = if a.degree() >= b.degree() {
        (a.primitive_part(), b.primitive_part())
    } else {
        (b.primitive_part(), a.primitive_part())
    };
    while !y.is_zero() {
        if y.degree() == Some(0) {
            return IntPoly::one();
        }
        let r = x.pseudo_rem(&y).primitive_part();
        x = y;
        y = r;
    }
    x.primitive_part()
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, mag: &BigInt, deg: usize) -> fmt::Result {
    match deg {
        0 => write!(f, "{mag}"),
        _ => {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if deg == 1 {
                write!(f, "e")
            } else {
                write!(f, "e^{deg}")
            }
        }
    }
}

impl fmt::Display for IntPoly {
    /// Highest degree first: `-2*e^2 - 2*e + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_monomial(f, &mag, deg)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}
