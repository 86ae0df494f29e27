use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use super::rational::{cmp_fraction, Rational};
use crate::error::{Error, Result};

/// Exact count ratio such as `22/112`.
///
/// The original numerator and denominator are kept unreduced so the counts
/// behind a proportion stay visible; equality and ordering compare values.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Fraction {
    numerator: u64,
    denominator: u64,
}

impl Fraction {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidFraction {
                numerator,
                denominator,
                reason: "denominator must be positive",
            });
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    /// A fraction constrained to `[0, 1]`, as used for acceptance proportions.
    pub fn proportion(numerator: u64, denominator: u64) -> Result<Self> {
        let f = Self::new(numerator, denominator)?;
        if numerator > denominator {
            return Err(Error::InvalidFraction {
                numerator,
                denominator,
                reason: "proportion exceeds 1",
            });
        }
        Ok(f)
    }

    pub fn one() -> Self {
        Self {
            numerator: 1,
            denominator: 1,
        }
    }

    pub fn zero() -> Self {
        Self {
            numerator: 0,
            denominator: 1,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    pub fn is_proportion(&self) -> bool {
        self.numerator <= self.denominator
    }

    pub fn as_rational(&self) -> Rational {
        Rational::new(i128::from(self.numerator), i128::from(self.denominator))
            .expect("denominator checked at construction")
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_fraction(
            self.numerator,
            self.denominator,
            other.numerator,
            other.denominator,
        )
    }
}

impl Hash for Fraction {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.as_rational().hash(state);
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let malformed = || Error::MalformedDecimal(s.to_string());
        let (n, d) = s.trim().split_once('/').ok_or_else(malformed)?;
        let n = n.trim().parse::<u64>().map_err(|_| malformed())?;
        let d = d.trim().parse::<u64>().map_err(|_| malformed())?;
        Fraction::new(n, d)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FractionRepr {
    Parts { numerator: u64, denominator: u64 },
    Text(String),
}

/// Accepts `{"numerator": n, "denominator": d}` or the text form `"n/d"`.
impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match FractionRepr::deserialize(deserializer)? {
            FractionRepr::Parts {
                numerator,
                denominator,
            } => Fraction::new(numerator, denominator),
            FractionRepr::Text(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_is_by_value() {
        assert_eq!(Fraction::new(22, 112).unwrap(), Fraction::new(11, 56).unwrap());
        assert!(Fraction::new(14, 112).unwrap() < Fraction::new(22, 112).unwrap());
        assert_eq!(Fraction::new(22, 112).unwrap().to_string(), "22/112");
    }

    #[test]
    fn rejects_invalid() {
        assert!(Fraction::new(1, 0).is_err());
        assert!(Fraction::proportion(3, 2).is_err());
        assert!(Fraction::proportion(2, 2).is_ok());
        assert!(serde_json::from_str::<Fraction>(r#"{"numerator":1,"denominator":0}"#).is_err());
    }

    #[test]
    fn parses_slash_form() {
        assert_eq!(
            "22/112".parse::<Fraction>().unwrap(),
            Fraction::new(22, 112).unwrap()
        );
        assert!("22".parse::<Fraction>().is_err());
    }
}
