use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::StructureError;

/// Which super-Virasoro algebra: odd indices in Z (Ramond) or Z + 1/2 (Neveu-Schwarz).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sector {
    Ramond,
    NeveuSchwarz,
}

impl Sector {
    /// Parity that `2r` must have for odd indices `r`.
    pub(crate) fn doubled_parity(self) -> i64 {
        match self {
            Sector::Ramond => 0,
            Sector::NeveuSchwarz => 1,
        }
    }

    pub fn admits(self, r: HalfInt) -> bool {
        r.doubled().rem_euclid(2) == self.doubled_parity()
    }

    /// The smallest non-negative odd index, `theta`.
    pub fn theta(self) -> HalfInt {
        HalfInt::from_doubled(self.doubled_parity())
    }

    pub fn theta_str(self) -> &'static str {
        match self {
            Sector::Ramond => "0",
            Sector::NeveuSchwarz => "1/2",
        }
    }

    pub fn parse_theta(s: &str) -> Result<Self, StructureError> {
        match s.trim() {
            "0" => Ok(Sector::Ramond),
            "1/2" | "0.5" => Ok(Sector::NeveuSchwarz),
            other => Err(StructureError::Parse(format!(
                "theta must be 0 or 1/2, got {other:?}"
            ))),
        }
    }

    pub fn both() -> [Sector; 2] {
        [Sector::Ramond, Sector::NeveuSchwarz]
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.theta_str())
    }
}

/// An element of `Z/2`, stored doubled so that arithmetic stays in the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt(doubled)
    }

    pub const fn from_int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `self + m`
    pub fn shift(self, m: i64) -> Self {
        HalfInt(self.0 + 2 * m)
    }

    /// `self + other`, which is an integer whenever both lie in the same sector.
    pub fn sum_int(self, other: HalfInt) -> Option<i64> {
        let s = self.0 + other.0;
        (s % 2 == 0).then_some(s / 2)
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    /// Lowest terms: `3/2`, `-1/2`, `2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = StructureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || StructureError::Parse(format!("not an integer or k/2: {s:?}"));
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad()),
            Some((k, "2")) => k.trim().parse::<i64>().map(HalfInt).map_err(|_| bad()),
            Some(_) => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `(-1)^(alpha*beta)`: negative only for two odd arguments.
    pub fn koszul_negative(self, other: Parity) -> bool {
        self == Parity::Odd && other == Parity::Odd
    }
}

/// One basis vector: `L(m)`, `G(r)` or the central element `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisIndex {
    L(i64),
    G(HalfInt),
    C,
}

impl BasisIndex {
    pub fn parity(self) -> Parity {
        match self {
            BasisIndex::G(_) => Parity::Odd,
            BasisIndex::L(_) | BasisIndex::C => Parity::Even,
        }
    }

    pub fn g_doubled(doubled: i64) -> Self {
        BasisIndex::G(HalfInt::from_doubled(doubled))
    }

    pub fn check_sector(self, sector: Sector) -> Result<Self, StructureError> {
        match self {
            BasisIndex::G(r) if !sector.admits(r) => Err(StructureError::SectorParity { index: r, sector }),
            _ => Ok(self),
        }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisIndex::L(m) => write!(f, "L({m})"),
            BasisIndex::G(r) => write!(f, "G({r})"),
            BasisIndex::C => write!(f, "c"),
        }
    }
}

impl FromStr for BasisIndex {
    type Err = StructureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "c" {
            return Ok(BasisIndex::C);
        }
        let bad = || StructureError::Parse(format!("not a basis index: {s:?}"));
        let inner = |prefix: char| {
            t.strip_prefix(prefix)
                .and_then(|r| r.trim_start().strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if let Some(m) = inner('L') {
            return m.trim().parse().map(BasisIndex::L).map_err(|_| bad());
        }
        if let Some(r) = inner('G') {
            return r.parse().map(BasisIndex::G);
        }
        Err(bad())
    }
}

/// Finite index box: `|m| <= n` for even indices and `r = theta + k` with `|k| <= n` for odd ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub n: u32,
    pub sector: Sector,
}

impl Window {
    pub fn new(n: u32, sector: Sector) -> Self {
        Self { n, sector }
    }

    pub fn evens(&self) -> impl Iterator<Item = i64> + Clone {
        let n = self.n as i64;
        -n..=n
    }

    /// Odd indices in increasing order.
    pub fn odds(&self) -> impl Iterator<Item = HalfInt> + Clone {
        let n = self.n as i64;
        let p = self.sector.doubled_parity();
        (p - 2 * n..=p + 2 * n).step_by(2).map(HalfInt::from_doubled)
    }

    pub fn contains_even(&self, m: i64) -> bool {
        m.unsigned_abs() <= self.n as u64
    }

    pub fn contains_odd(&self, r: HalfInt) -> bool {
        let k = r.doubled() - self.sector.doubled_parity();
        self.sector.admits(r) && k.abs() <= 2 * self.n as i64
    }

    pub fn contains(&self, b: BasisIndex) -> bool {
        match b {
            BasisIndex::L(m) => self.contains_even(m),
            BasisIndex::G(r) => self.contains_odd(r),
            BasisIndex::C => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halfint_text() {
        assert_eq!(HalfInt::from_doubled(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_doubled(-1).to_string(), "-1/2");
        assert_eq!(HalfInt::from_doubled(4).to_string(), "2");
        assert_eq!("-5/2".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(-5));
        assert_eq!("3".parse::<HalfInt>().unwrap(), HalfInt::from_int(3));
        assert!("1/3".parse::<HalfInt>().is_err());
    }

    #[test]
    fn basis_text() {
        for s in ["L(3)", "L(-2)", "G(1/2)", "G(-3/2)", "G(0)", "c"] {
            assert_eq!(s.parse::<BasisIndex>().unwrap().to_string(), s);
        }
        assert!("X(1)".parse::<BasisIndex>().is_err());
        assert!("L(1/2)".parse::<BasisIndex>().is_err());
    }

    #[test]
    fn windows() {
        let ns = Window::new(0, Sector::NeveuSchwarz);
        assert_eq!(ns.evens().collect::<Vec<_>>(), vec![0]);
        assert_eq!(
            ns.odds().map(|r| r.to_string()).collect::<Vec<_>>(),
            vec!["1/2"]
        );
        let r = Window::new(2, Sector::Ramond);
        assert_eq!(r.odds().count(), 5);
        assert!(r.contains_odd(HalfInt::from_int(-2)));
        assert!(!r.contains_odd(HalfInt::from_doubled(1)));
        let w = Window::new(2, Sector::NeveuSchwarz);
        assert!(w.contains_odd(HalfInt::from_doubled(5)));
        assert!(w.contains_odd(HalfInt::from_doubled(-3)));
        assert!(!w.contains_odd(HalfInt::from_doubled(-5)));
    }

    #[test]
    fn sector_parity() {
        assert!(BasisIndex::g_doubled(1).check_sector(Sector::Ramond).is_err());
        assert!(BasisIndex::g_doubled(2).check_sector(Sector::NeveuSchwarz).is_err());
        assert!(BasisIndex::g_doubled(-3).check_sector(Sector::NeveuSchwarz).is_ok());
    }
}
