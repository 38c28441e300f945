//! Rational numbers stored in machine words while they fit.
//!
//! Almost every coefficient met in the representation is a small fraction,
//! and `BigRational` pays an allocation and a bignum gcd per operation. `Rat`
//! keeps `i64` numerator and denominator, computes in `i128` and only falls
//! back to `BigRational` when a result leaves the `i64` range.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// Canonical: `Small` is reduced with a positive denominator, and `Big` is
/// used only for values that do not fit `Small`. Structural equality is
/// therefore numeric equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Rat {
    Small(i64, i64),
    Big(BigRational),
}

impl Rat {
    pub fn zero() -> Self {
        Rat::Small(0, 1)
    }

    pub fn one() -> Self {
        Rat::Small(1, 1)
    }

    pub fn int(n: i64) -> Self {
        Rat::Small(n, 1)
    }

    fn from_i64(n: i64, d: i64) -> Self {
        debug_assert!(d > 0);
        if d == 1 {
            return Rat::Small(n, 1);
        }
        let g = n.gcd(&d);
        Rat::Small(n / g, d / g)
    }

    pub fn small(&self) -> Option<(i64, i64)> {
        match self {
            Rat::Small(n, d) => Some((*n, *d)),
            Rat::Big(_) => None,
        }
    }

    pub fn from_i128(n: i128, d: i128) -> Self {
        debug_assert!(d != 0);
        if d > 0 {
            if let (Ok(n), Ok(d)) = (i64::try_from(n), i64::try_from(d)) {
                return Rat::from_i64(n, d);
            }
        }
        let g = n.gcd(&d);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat::Small(n, d),
            _ => Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    pub fn from_big(c: BigRational) -> Self {
        match (c.numer().to_i64(), c.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(c),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(c) => c.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn add(&self, other: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, other) {
            if b == d {
                if let Some(n) = a.checked_add(*c) {
                    return Rat::from_i64(n, *b);
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            // |a d + c b| < 2^127 since every factor is below 2^63
            return Rat::from_i128(a * d + c * b, b * d);
        }
        Rat::from_big(self.to_big() + other.to_big())
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) if *n != i64::MIN => Rat::Small(-n, *d),
            _ => Rat::from_big(-self.to_big()),
        }
    }

    pub fn sub(&self, other: &Rat) -> Rat {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, other) {
            if let (Some(n), Some(d)) = (a.checked_mul(*c), b.checked_mul(*d)) {
                return Rat::from_i64(n, d);
            }
            return Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Rat::from_big(self.to_big() * other.to_big())
    }

    /// Panics on zero, like `BigRational::recip`.
    pub fn recip(&self) -> Rat {
        match self {
            Rat::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                Rat::from_i128(*d as i128, *n as i128)
            }
            Rat::Big(c) => Rat::from_big(c.recip()),
        }
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

/// Same text as `BigRational`: `n` or `n/d`.
impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(c) if c.denom().is_one() => write!(f, "{}", c.numer()),
            Rat::Big(c) => write!(f, "{}/{}", c.numer(), c.denom()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arithmetic_reduces() {
        let half = Rat::from_i128(1, 2);
        let third = Rat::from_i128(-2, -6);
        assert_eq!(half.add(&third), Rat::Small(5, 6));
        assert_eq!(half.mul(&Rat::int(4)), Rat::int(2));
        assert_eq!(half.sub(&half), Rat::zero());
        assert_eq!(Rat::from_i128(3, -6), Rat::Small(-1, 2));
        assert_eq!(Rat::Small(-2, 3).recip(), Rat::Small(-3, 2));
    }

    #[test]
    fn overflow_falls_back_and_returns() {
        let big = Rat::int(i64::MAX).mul(&Rat::int(4));
        assert!(matches!(big, Rat::Big(_)));
        let back = big.mul(&Rat::from_i128(1, 8));
        assert!(matches!(back, Rat::Small(..)));
        assert_eq!(back.to_big(), BigRational::new(i64::MAX.into(), 2.into()));
        assert!(matches!(Rat::int(i64::MIN).neg(), Rat::Big(_)));
    }

    #[test]
    fn text_matches_big_rational() {
        for r in [Rat::int(-3), Rat::from_i128(7, -4), Rat::zero()] {
            assert_eq!(r.to_string(), r.to_big().to_string());
        }
    }
}
