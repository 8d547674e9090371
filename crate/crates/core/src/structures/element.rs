use std::collections::BTreeMap;
use std::fmt;

use crate::exactfield::{FieldError, Scalar};

use super::{BasisIndex, Parity, StructureError};

/// Finite linear combination of basis vectors. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element<S> {
    terms: BTreeMap<BasisIndex, S>,
}

impl<S: Scalar> Default for Element<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Element<S> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(b: BasisIndex) -> Self {
        Self::term(b, S::one())
    }

    pub fn term(b: BasisIndex, coeff: S) -> Self {
        let mut e = Self::zero();
        e.add_term(b, coeff);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisIndex, S)>) -> Self {
        let mut e = Self::zero();
        for (b, c) in terms {
            e.add_term(b, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisIndex, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `b`, zero when absent.
    pub fn coeff(&self, b: &BasisIndex) -> S {
        self.terms.get(b).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, b: BasisIndex, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(c) => {
                let sum = c.plus(&coeff);
                if sum.is_zero() {
                    self.terms.remove(&b);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(b, coeff);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, k: &S) {
        if k.is_zero() {
            return;
        }
        for (b, c) in &other.terms {
            self.add_term(*b, c.times(k));
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &S::one());
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &S::one().negated());
        out
    }

    pub fn scaled(&self, k: &S) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn negated(&self) -> Self {
        self.scaled(&S::one().negated())
    }

    /// Common parity of all terms; `None` for the zero element.
    pub fn parity(&self) -> Result<Option<Parity>, StructureError> {
        let mut it = self.terms.keys().map(|b| b.parity());
        let Some(first) = it.next() else {
            return Ok(None);
        };
        if it.all(|p| p == first) {
            Ok(Some(first))
        } else {
            Err(StructureError::NotHomogeneous(self.to_string()))
        }
    }

    pub fn try_map<T: Scalar>(
        &self,
        mut f: impl FnMut(&S) -> Result<T, FieldError>,
    ) -> Result<Element<T>, FieldError> {
        let mut out = Element::zero();
        for (b, c) in &self.terms {
            out.add_term(*b, f(c)?);
        }
        Ok(out)
    }
}

/// Whether a coefficient prints as a single token and needs no parentheses.
fn is_atomic(s: &str) -> bool {
    if s.chars().all(|c| c.is_ascii_digit()) {
        return true;
    }
    // a single parenthesised group such as "(e + 1)"
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let mut depth = 0i32;
        for c in inner.chars() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return false;
                    }
                }
                _ => {}
            }
        }
        return depth == 0;
    }
    false
}

impl<S: Scalar> fmt::Display for Element<S> {
    /// `4*L(0) + (1/2)*c`; the zero element prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{b}")?;
                continue;
            }
            let cs = c.to_string();
            if is_atomic(&cs) {
                write!(f, "{cs}*{b}")?;
            } else {
                write!(f, "({cs})*{b}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::RatFun;

    fn rf(s: &str) -> RatFun {
        s.parse().unwrap()
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut e = Element::term(BasisIndex::L(1), rf("e"));
        e.add_term(BasisIndex::L(1), rf("-e"));
        assert!(e.is_zero());
        assert_eq!(e.to_string(), "0");
    }

    #[test]
    fn display() {
        let e = Element::from_terms([
            (BasisIndex::L(0), RatFun::from_i64(4)),
            (BasisIndex::C, RatFun::from_ratio(1, 2)),
        ]);
        assert_eq!(e.to_string(), "4*L(0) + (1/2)*c");
        let g = Element::term(BasisIndex::g_doubled(1), RatFun::from_ratio(-1, 2));
        assert_eq!(g.to_string(), "(-1/2)*G(1/2)");
        let h = Element::term(BasisIndex::L(0), rf("1 - e"));
        assert_eq!(h.to_string(), "(-e + 1)*L(0)");
        let k = Element::term(BasisIndex::C, rf("(e^2-1)/(24*e)"));
        assert_eq!(k.to_string(), "((e^2 - 1)/(24*e))*c");
    }

    #[test]
    fn parity_of_mixed_element() {
        let e: Element<RatFun> = Element::basis(BasisIndex::L(1)).plus(&Element::basis(BasisIndex::g_doubled(1)));
        assert!(e.parity().is_err());
        let c: Element<RatFun> = Element::basis(BasisIndex::C).plus(&Element::basis(BasisIndex::L(2)));
        assert_eq!(c.parity().unwrap(), Some(Parity::Even));
    }
}
