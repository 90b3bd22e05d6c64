//! Exact rationals and the extended value set `Q ∪ {∞}` used for depths.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Builds `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn from_u64(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `a`, `-a`, or `a/b`. Non-reduced input such as `26/54` is accepted.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| {
        BigInt::from_str(t.trim()).map_err(|_| Error::Parse(format!("not a rational: `{s}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(parse_int(n)?, d))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

/// Renders `n` for integers and `n/d` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest `f64`, for drawing only.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// True iff `r` lies in `(1/e)·Z`.
pub fn on_grid(r: &Rat, e: u64) -> bool {
    (r * from_u64(e)).is_integer()
}

pub fn is_nonnegative(r: &Rat) -> bool {
    !r.is_negative()
}

/// A depth or valuation: a rational number or `∞`.
///
/// The derived ordering places every finite value below `Infinite`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Depth {
    Finite(Rat),
    Infinite,
}

impl Depth {
    pub fn finite(r: Rat) -> Self {
        Depth::Finite(r)
    }

    pub fn zero() -> Self {
        Depth::Finite(Rat::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Depth::Infinite)
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            Depth::Finite(r) => Some(r),
            Depth::Infinite => None,
        }
    }

    /// `min(self, x)` for a finite `x`; `min(∞, x) = x`.
    pub fn min_with(&self, x: &Rat) -> Rat {
        match self {
            Depth::Finite(r) if r < x => r.clone(),
            _ => x.clone(),
        }
    }

    pub fn at_least(&self, r: &Rat) -> bool {
        match self {
            Depth::Finite(d) => d >= r,
            Depth::Infinite => true,
        }
    }

    pub fn exceeds(&self, r: &Rat) -> bool {
        match self {
            Depth::Finite(d) => d > r,
            Depth::Infinite => true,
        }
    }
}

impl From<Rat> for Depth {
    fn from(r: Rat) -> Self {
        Depth::Finite(r)
    }
}

impl Add for Depth {
    type Output = Depth;

    fn add(self, rhs: Depth) -> Depth {
        match (self, rhs) {
            (Depth::Finite(a), Depth::Finite(b)) => Depth::Finite(a + b),
            _ => Depth::Infinite,
        }
    }
}

impl<'a> Add<&'a Depth> for &'a Depth {
    type Output = Depth;

    fn add(self, rhs: &Depth) -> Depth {
        self.clone() + rhs.clone()
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(r) => f.write_str(&fmt_rat(r)),
            Depth::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Depth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Depth::Infinite),
            t => parse_rat(t).map(Depth::Finite),
        }
    }
}

/// Smallest power `p^k` dividing `n` exactly, returned as `k`.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    assert!(n != 0 && p > 1);
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

/// p-adic valuation of a nonzero big integer.
pub fn valuation_bigint(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut k = 0u64;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&m, &p);
        if !r.is_zero() {
            return Some(k);
        }
        m = q;
        k += 1;
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn one() -> Rat {
    Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_ordering_and_arithmetic() {
        let a = Depth::Finite(rat(7, 3));
        assert!(a < Depth::Infinite);
        assert_eq!(a.clone() + Depth::Infinite, Depth::Infinite);
        assert_eq!(Depth::Infinite.min_with(&rat(1, 2)), rat(1, 2));
        assert_eq!(a.min_with(&int(5)), rat(7, 3));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("26/54").unwrap(), rat(13, 27));
        assert_eq!(parse_rat("-3").unwrap(), int(-3));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(fmt_rat(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rat(&rat(4, 2)), "2");
        assert_eq!("inf".parse::<Depth>().unwrap(), Depth::Infinite);
        assert_eq!(Depth::Finite(rat(1, 8)).to_string(), "1/8");
    }

    #[test]
    fn grid_and_valuations() {
        assert!(on_grid(&rat(3, 8), 8));
        assert!(!on_grid(&rat(1, 3), 8));
        assert_eq!(valuation_u64(24, 2), 3);
        assert_eq!(valuation_bigint(&BigInt::from(-72), 3), Some(2));
        assert_eq!(valuation_bigint(&BigInt::from(0), 3), None);
        assert!(is_prime(97) && !is_prime(91));
    }
}
