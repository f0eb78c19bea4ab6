use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinearError;

/// p-adic valuation of an element. Zero has valuation [`Valuation::Infinite`].
///
/// Variant order matters: every finite valuation compares below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub(crate) fn int_valuation(x: &BigInt, p: u32) -> u64 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// p-adic valuation of an arbitrary rational.
pub fn rational_valuation(x: &BigRational, p: u32) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let num = int_valuation(x.numer(), p) as i64;
    let den = int_valuation(x.denom(), p) as i64;
    Valuation::Finite(num - den)
}

/// `p^e` as an exact rational; `e` may be negative.
pub fn prime_power(p: u32, e: i64) -> BigRational {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// A rational number whose denominator is prime to `p`, i.e. an element
/// of the localization of the integers at `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalizedRational {
    value: BigRational,
    prime: u32,
}

impl LocalizedRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>, prime: u32) -> Result<Self, LinearError> {
        let den = den.into();
        if den.is_zero() {
            return Err(LinearError::ZeroDenominator);
        }
        Self::from_rational(BigRational::new(num.into(), den), prime)
    }

    pub fn from_rational(value: BigRational, prime: u32) -> Result<Self, LinearError> {
        if !is_small_prime(prime) {
            return Err(LinearError::NotPrime(prime));
        }
        // BigRational keeps the denominator positive and reduced.
        if value.denom().is_multiple_of(&BigInt::from(prime)) {
            return Err(LinearError::NonLocalDenominator {
                value: value.to_string(),
                prime,
            });
        }
        Ok(LocalizedRational { value, prime })
    }

    pub fn from_int(x: i64, prime: u32) -> Result<Self, LinearError> {
        Self::from_rational(BigRational::from_integer(x.into()), prime)
    }

    /// Parses `"num/den"` or a plain integer.
    pub fn parse(s: &str, prime: u32) -> Result<Self, LinearError> {
        let value = BigRational::from_str(s.trim()).map_err(|_| LinearError::Parse(s.to_string()))?;
        Self::from_rational(value, prime)
    }

    pub(crate) fn from_rational_unchecked(value: BigRational, prime: u32) -> Self {
        debug_assert!(!value.denom().is_multiple_of(&BigInt::from(prime)));
        LocalizedRational { value, prime }
    }

    pub fn zero(prime: u32) -> Self {
        LocalizedRational { value: BigRational::zero(), prime }
    }

    pub fn one(prime: u32) -> Self {
        LocalizedRational { value: BigRational::one(), prime }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        rational_valuation(&self.value, self.prime)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    /// Inverse, defined only for units of the local ring.
    pub fn inverse(&self) -> Option<Self> {
        self.is_unit().then(|| LocalizedRational {
            value: self.value.recip(),
            prime: self.prime,
        })
    }

    /// Exact quotient if it stays inside the local ring.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.prime, rhs.prime, "mixed primes");
        if rhs.is_zero() {
            return None;
        }
        if self.valuation() < rhs.valuation() {
            return None;
        }
        Some(LocalizedRational {
            value: &self.value / &rhs.value,
            prime: self.prime,
        })
    }

    /// Splits a nonzero element as `p^v * unit`, returning `(v, unit)`.
    pub fn split_unit(&self) -> Option<(u64, LocalizedRational)> {
        let v = self.valuation().finite()? as u64;
        let unit = &self.value / prime_power(self.prime, v as i64);
        Some((v, LocalizedRational { value: unit, prime: self.prime }))
    }
}

impl fmt::Display for LocalizedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.value.numer(), self.value.denom())
    }
}

impl PartialOrd for LocalizedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.prime == other.prime).then(|| self.value.cmp(&other.value))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a LocalizedRational> for &'a LocalizedRational {
            type Output = LocalizedRational;
            fn $method(self, rhs: &'a LocalizedRational) -> LocalizedRational {
                assert_eq!(self.prime, rhs.prime, "mixed primes");
                LocalizedRational { value: &self.value $op &rhs.value, prime: self.prime }
            }
        }
        impl $tr for LocalizedRational {
            type Output = LocalizedRational;
            fn $method(self, rhs: LocalizedRational) -> LocalizedRational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Neg for LocalizedRational {
    type Output = LocalizedRational;
    fn neg(self) -> LocalizedRational {
        LocalizedRational { value: -self.value, prime: self.prime }
    }
}

pub(crate) fn is_small_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(LocalizedRational::from_int(12, 2).unwrap().valuation(), Valuation::Finite(2));
        assert_eq!(LocalizedRational::from_int(0, 7).unwrap().valuation(), Valuation::Infinite);
        assert_eq!(LocalizedRational::new(9, 5, 3).unwrap().valuation(), Valuation::Finite(2));
    }

    #[test]
    fn denominator_divisible_by_prime_is_rejected() {
        let err = LocalizedRational::new(5, 3, 3).unwrap_err();
        assert!(matches!(err, LinearError::NonLocalDenominator { prime: 3, .. }));
        // 6/3 reduces to 2 and is fine.
        assert!(LocalizedRational::new(6, 3, 3).is_ok());
    }

    #[test]
    fn infinity_sorts_above_every_finite_value() {
        assert!(Valuation::Finite(i64::MAX) < Valuation::Infinite);
        assert!(Valuation::Finite(-3) < Valuation::Finite(0));
    }

    #[test]
    fn parse_and_display() {
        let x = LocalizedRational::parse("-4/6", 5).unwrap();
        assert_eq!(x.to_string(), "-2/3");
        assert!(LocalizedRational::parse("1/10", 5).is_err());
        assert!(LocalizedRational::parse("abc", 5).is_err());
        assert!(LocalizedRational::from_int(1, 4).is_err());
    }

    #[test]
    fn unit_split_and_division() {
        let x = LocalizedRational::new(40, 3, 2).unwrap();
        let (v, u) = x.split_unit().unwrap();
        assert_eq!(v, 3);
        assert!(u.is_unit());
        let two = LocalizedRational::from_int(2, 2).unwrap();
        assert!(two.checked_div(&x).is_none());
        assert_eq!(x.checked_div(&two).unwrap().valuation(), Valuation::Finite(2));
        assert!(two.inverse().is_none());
    }
}
