use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number. Serialized as a `{numerator, denominator}` pair.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub fn new(numerator: i128, denominator: i128) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::Overflow("rational with zero denominator"));
        }
        Ok(Self(Ratio::new(numerator, denominator)))
    }

    pub fn from_integer(value: i128) -> Self {
        Self(Ratio::from_integer(value))
    }

    pub fn zero() -> Self {
        Self(Ratio::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn numerator(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i128 {
        *self.0.denom()
    }

    pub fn inner(&self) -> Ratio<i128> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        *self.0.numer() > 0
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.0
            .checked_add(&other.0)
            .map(Self)
            .ok_or(Error::Overflow("rational sum"))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.0
            .checked_mul(&other.0)
            .map(Self)
            .ok_or(Error::Overflow("rational product"))
    }

    /// Fails with `Overflow` on overflow; callers check for a zero divisor first.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Overflow("rational division by zero"));
        }
        self.0
            .checked_div(&other.0)
            .map(Self)
            .ok_or(Error::Overflow("rational quotient"))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    /// Nearest integer, halves rounded away from zero.
    pub fn round_half_away(&self) -> i128 {
        self.0.round().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        let (n, d) = (*self.0.numer(), *self.0.denom());
        (n / d) as f64 + (n % d) as f64 / d as f64
    }
}

impl From<Ratio<i128>> for Rational {
    fn from(value: Ratio<i128>) -> Self {
        Self(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    numerator: i128,
    denominator: i128,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RationalRepr {
            numerator: self.numerator(),
            denominator: self.denominator(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RationalRepr::deserialize(deserializer)?;
        Rational::new(repr.numerator, repr.denominator).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn cmp_fraction(a_num: u64, a_den: u64, b_num: u64, b_den: u64) -> Ordering {
    (u128::from(a_num) * u128::from(b_den)).cmp(&(u128::from(b_num) * u128::from(a_den)))
}
