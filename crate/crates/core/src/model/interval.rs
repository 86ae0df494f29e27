use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// Dimension tag carried by an [`Interval`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Money,
    Hours,
    Rate,
    Count,
    Fraction,
}

impl Unit {
    pub fn name(self) -> &'static str {
        match self {
            Unit::Money => "money",
            Unit::Hours => "hours",
            Unit::Rate => "rate",
            Unit::Count => "count",
            Unit::Fraction => "fraction",
        }
    }

    pub(crate) fn is_dimensionless(self) -> bool {
        matches!(self, Unit::Count | Unit::Fraction)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Closed range `[lo, hi]` of finite values in a single unit.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
    unit: Unit,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, unit: Unit) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFiniteInterval);
        }
        if lo > hi {
            return Err(Error::InvertedInterval { lo, hi });
        }
        // Normalize -0.0 so serialization is canonical.
        Ok(Self {
            lo: lo + 0.0,
            hi: hi + 0.0,
            unit,
        })
    }

    pub fn point(value: f64, unit: Unit) -> Result<Self> {
        Self::new(value, value, unit)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalRepr {
    lo: f64,
    hi: f64,
    unit: Unit,
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = IntervalRepr::deserialize(deserializer)?;
        Interval::new(r.lo, r.hi, r.unit).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_and_non_finite() {
        assert!(matches!(
            Interval::new(2.0, 1.0, Unit::Money),
            Err(Error::InvertedInterval { .. })
        ));
        assert!(Interval::new(f64::NAN, 1.0, Unit::Money).is_err());
        assert!(Interval::new(0.0, f64::INFINITY, Unit::Money).is_err());
        assert!(serde_json::from_str::<Interval>(r#"{"lo":3,"hi":1,"unit":"count"}"#).is_err());
    }

    #[test]
    fn serialization_is_bit_exact() {
        let i = Interval::new(0.1 + 0.2, 2545.454545454545, Unit::Money).unwrap();
        let json = serde_json::to_string(&i).unwrap();
        let back: Interval = serde_json::from_str(&json).unwrap();
        assert_eq!(back.lo().to_bits(), i.lo().to_bits());
        assert_eq!(back.hi().to_bits(), i.hi().to_bits());
    }
}
