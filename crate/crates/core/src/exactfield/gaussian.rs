use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::parse::parse_expression;
use super::{FieldError, Scalar};

/// Exact complex number `re + im*i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// `(re_n/re_d) + (im_n/im_d)*i`
    pub fn new_i64(re: (i64, i64), im: (i64, i64)) -> Self {
        Self {
            re: BigRational::new(re.0.into(), re.1.into()),
            im: BigRational::new(im.0.into(), im.1.into()),
        }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self {
            re: BigRational::from_integer(v),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The integer this value equals, if any.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.im.is_zero() && self.re.is_integer()).then(|| self.re.to_integer())
    }

    fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(v.into())
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Self {
            re: BigRational::new(n.into(), d.into()),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        Self {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn minus(&self, rhs: &Self) -> Self {
        Self {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn times(&self, rhs: &Self) -> Self {
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn negated(&self) -> Self {
        Self {
            re: -&self.re,
            im: -&self.im,
        }
    }

    fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    fn parse_exact(s: &str) -> Result<Self, FieldError> {
        parse_expression(
            s,
            |n: &BigInt| GaussianRational::from_bigint(n.clone()),
            |name| (name == "i").then(GaussianRational::i),
        )
    }
}

impl FromStr for GaussianRational {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_exact(s)
    }
}

fn fmt_imag(f: &mut fmt::Formatter<'_>, mag: &BigRational) -> fmt::Result {
    if mag.is_one() {
        write!(f, "i")
    } else {
        write!(f, "{mag}*i")
    }
}

impl fmt::Display for GaussianRational {
    /// `3/5`, `2/3*i`, `1/2 - i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-")?;
            }
            return fmt_imag(f, &self.im.abs());
        }
        write!(f, "{}", self.re)?;
        write!(f, "{}", if self.im.is_negative() { " - " } else { " + " })?;
        fmt_imag(f, &self.im.abs())
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gaussian[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn i_squared() {
        let i = GaussianRational::i();
        assert_eq!(i.times(&i), GaussianRational::from_i64(-1));
    }

    #[test]
    fn display_parse() {
        let cases = ["3/5", "2/3*i", "-i", "1/2 - i", "7/3 + 4/5*i", "0"];
        for c in cases {
            let v: GaussianRational = c.parse().unwrap();
            assert_eq!(v.to_string(), c);
        }
        assert_eq!(
            "i*2/3".parse::<GaussianRational>().unwrap(),
            GaussianRational::new_i64((0, 1), (2, 3))
        );
    }

    proptest! {
        #[test]
        fn inverse_round_trip(a in -9i64..=9, b in 1i64..=9, c in -9i64..=9, d in 1i64..=9) {
            let z = GaussianRational::new_i64((a, b), (c, d));
            if !z.is_zero() {
                prop_assert_eq!(z.times(&z.inverse().unwrap()), GaussianRational::one());
            }
            prop_assert_eq!(z.to_string().parse::<GaussianRational>().unwrap(), z);
        }
    }
}
