use crate::exactfield::Scalar;

use super::{BasisIndex, Element, Sector, StructureError};

/// Reference super-Virasoro bracket of two basis vectors, central term included.
///
/// `[L_m, L_n] = (m-n) L_{m+n} + (m^3-m)/12 delta c`, `[L_m, G_r] = (m/2-r) G_{m+r}`,
/// `[G_r, G_s] = 2 L_{r+s} + (4r^2-1)/12 delta c`; everything with `c` vanishes.
pub fn target_bracket<S: Scalar>(sector: Sector, b1: BasisIndex, b2: BasisIndex) -> Element<S> {
    bracket(sector, b1, b2, true)
}

/// The same bracket with the central term dropped.
pub fn target_bracket_centerless<S: Scalar>(sector: Sector, b1: BasisIndex, b2: BasisIndex) -> Element<S> {
    bracket(sector, b1, b2, false)
}

fn bracket<S: Scalar>(sector: Sector, b1: BasisIndex, b2: BasisIndex, central: bool) -> Element<S> {
    use BasisIndex::*;
    debug_assert!(b1.check_sector(sector).is_ok() && b2.check_sector(sector).is_ok());
    match (b1, b2) {
        (C, _) | (_, C) => Element::zero(),
        (L(m), L(n)) => {
            let mut e = Element::term(L(m + n), S::from_i64(m - n));
            if central && m + n == 0 {
                e.add_term(C, S::from_ratio(m * m * m - m, 12));
            }
            e
        }
        (L(m), G(r)) => Element::term(G(r.shift(m)), S::from_ratio(m - r.doubled(), 2)),
        (G(r), L(m)) => Element::term(G(r.shift(m)), S::from_ratio(r.doubled() - m, 2)),
        (G(r), G(s)) => {
            let Some(sum) = r.sum_int(s) else {
                return Element::zero();
            };
            let mut e = Element::term(L(sum), S::from_i64(2));
            if central && sum == 0 {
                let r2 = r.doubled();
                e.add_term(C, S::from_ratio(r2 * r2 - 1, 12));
            }
            e
        }
    }
}

/// Bilinear extension of a basis bracket to parity-homogeneous elements.
pub fn bracket_elements<S: Scalar>(
    basis_bracket: &impl Fn(BasisIndex, BasisIndex) -> Element<S>,
    x: &Element<S>,
    y: &Element<S>,
) -> Result<Element<S>, StructureError> {
    x.parity()?;
    y.parity()?;
    let mut out = Element::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            out.add_scaled(&basis_bracket(*a, *b), &ca.times(cb));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::RatFun;
    use crate::structures::HalfInt;
    use BasisIndex::*;

    #[test]
    fn examples() {
        let ns = Sector::NeveuSchwarz;
        let b: Element<RatFun> = target_bracket(ns, L(2), L(-2));
        assert_eq!(b.to_string(), "4*L(0) + (1/2)*c");
        let g = |d| G(HalfInt::from_doubled(d));
        let b: Element<RatFun> = target_bracket(ns, g(3), g(-3));
        assert_eq!(b.to_string(), "2*L(0) + (2/3)*c");
        assert!(target_bracket::<RatFun>(ns, C, g(1)).is_zero());
        let b: Element<RatFun> = target_bracket_centerless(ns, L(2), L(-2));
        assert_eq!(b.to_string(), "4*L(0)");
    }

    #[test]
    fn antisymmetry() {
        let s = Sector::Ramond;
        let g = |k| G(HalfInt::from_int(k));
        for m in -3..=3 {
            for k in -3..=3 {
                let a: Element<RatFun> = target_bracket(s, L(m), g(k));
                let b: Element<RatFun> = target_bracket(s, g(k), L(m));
                assert_eq!(a, b.negated());
                let a: Element<RatFun> = target_bracket(s, g(m), g(k));
                assert_eq!(a, target_bracket(s, g(k), g(m)));
            }
        }
    }
}
