//! Exact arithmetic in Q(e) and at Gaussian-rational specialisations of `e`.
//!
//! `e` stands for the deformation parameter of the left-symmetric products and
//! is treated as transcendental. Every identity the crate checks is therefore a
//! rational-function identity decided by comparing canonical forms; nothing in
//! here ever rounds.

mod gaussian;
mod parse;
mod poly;
mod ratfun;
mod scalar;

use thiserror::Error;

pub use gaussian::GaussianRational;
pub use poly::{poly_gcd, IntPoly};
pub use ratfun::{rf_add, rf_eval, rf_inv, rf_mul, rf_neg, rf_normalize, rf_sub, RatFun};
pub use scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: denominator {denominator} vanishes at e = {at}")]
    Pole { denominator: String, at: String },
    #[error("parse error in {input:?} at byte {position}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },
}

/// Whether `1/eps0` is an integer (including the excluded `eps0 = 0`).
///
/// Every denominator `1 + k*e` produced by the closed-form products is nonzero
/// at `eps0` exactly when this returns `false`.
pub fn inverse_is_integer(eps0: &GaussianRational) -> bool {
    match eps0.inverse() {
        Err(_) => true,
        Ok(inv) => inv.as_integer().is_some(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_denominators_never_vanish_symbolically() {
        for k in -40..=40 {
            if k == 0 {
                continue;
            }
            let d = RatFun::linear(1, k);
            assert!(!d.is_zero());
            for eps in ["3/5", "7/3", "2/3*i", "1/2 + i"] {
                let e0: GaussianRational = eps.parse().unwrap();
                assert!(!inverse_is_integer(&e0));
                assert!(!d.eval(&e0).unwrap().is_zero(), "1+{k}e at {eps}");
            }
        }
    }

    #[test]
    fn integer_inverse_detection() {
        assert!(inverse_is_integer(&"1/2".parse().unwrap()));
        assert!(inverse_is_integer(&"-1/3".parse().unwrap()));
        assert!(inverse_is_integer(&GaussianRational::zero()));
        assert!(!inverse_is_integer(&"2/3".parse().unwrap()));
        assert!(!inverse_is_integer(&GaussianRational::i()));
    }
}
