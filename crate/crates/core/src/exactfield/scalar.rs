use std::fmt::{Debug, Display};
use std::hash::Hash;

use super::FieldError;

/// Exact field used for structure constants.
///
/// Implemented by [`RatFun`](super::RatFun) (symbolic ε) and
/// [`GaussianRational`](super::GaussianRational) (ε specialised to a number).
pub trait Scalar:
    Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `n / d`, `d` nonzero.
    fn from_ratio(n: i64, d: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Result<Self, FieldError>;

    fn divided(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self.times(&rhs.inverse()?))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Parse the textual form produced by `Display`.
    fn parse_exact(s: &str) -> Result<Self, FieldError>;
}
