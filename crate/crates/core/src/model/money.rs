use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::decimal::{format_scaled, parse_scaled};
use super::rational::Rational;
use crate::error::{Error, Result};

pub(crate) const MICROS_PER_USD: i64 = 1_000_000;
const MONEY_SCALE: u32 = 6;
const HOURS_SCALE: u32 = 4;
const HOUR_UNITS: i64 = 10_000;
const RATE_SCALE: u32 = 2;
const MICROS_PER_CENT: i64 = 10_000;

/// Non-negative USD amount held as an integer count of micro-dollars.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub fn from_micros(micros: i64) -> Result<Self> {
        if micros < 0 {
            return Err(Error::Negative(format!("{micros} micro-USD")));
        }
        Ok(Self(micros))
    }

    pub fn from_usd(dollars: u32) -> Self {
        Self(i64::from(dollars) * MICROS_PER_USD)
    }

    /// Parses a decimal dollar literal with at most six fractional digits.
    pub fn from_usd_str(literal: &str) -> Result<Self> {
        let micros = parse_scaled(literal, MONEY_SCALE)?;
        i64::try_from(micros)
            .map(Self)
            .map_err(|_| Error::Overflow("money literal"))
    }

    pub fn micros(self) -> i64 {
        self.0
    }

    pub fn as_rational(self) -> Rational {
        Rational::from_integer(i128::from(self.0))
    }

    pub fn to_usd_f64(self) -> f64 {
        self.0 as f64 / MICROS_PER_USD as f64
    }

    pub fn checked_add(self, other: Money) -> Result<Money> {
        self.0
            .checked_add(other.0)
            .map(Money)
            .ok_or(Error::Overflow("money sum"))
    }

    pub fn checked_mul_count(self, count: u64) -> Result<Money> {
        i64::try_from(count)
            .ok()
            .and_then(|c| self.0.checked_mul(c))
            .map(Money)
            .ok_or(Error::Overflow("money product"))
    }

    /// Exact product with a non-negative rational; fails if the result is not a whole micro-dollar.
    pub fn checked_mul_rational(self, factor: &Rational) -> Result<Money> {
        if factor.numerator() < 0 {
            return Err(Error::Negative(factor.to_string()));
        }
        let product = self.as_rational().checked_mul(factor)?;
        if product.denominator() != 1 {
            return Err(Error::Overflow("money product below micro-dollar resolution"));
        }
        i64::try_from(product.numerator())
            .map(Money)
            .map_err(|_| Error::Overflow("money product"))
    }

    pub(crate) fn from_micros_i128(micros: i128, what: &'static str) -> Result<Money> {
        let micros = i64::try_from(micros).map_err(|_| Error::Overflow(what))?;
        Money::from_micros(micros)
    }
}

impl FromStr for Money {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Money::from_usd_str(s)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_scaled(i128::from(self.0), MONEY_SCALE))
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = deserializer.deserialize_any(DecimalText)?;
        Money::from_usd_str(&text).map_err(de::Error::custom)
    }
}

/// Fully loaded labor cost per hour, quoted to the cent.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct HourlyRate(Money);

impl HourlyRate {
    pub fn new(usd_per_hour: Money) -> Result<Self> {
        if usd_per_hour.micros() % MICROS_PER_CENT != 0 {
            return Err(Error::TooManyFractionalDigits {
                literal: usd_per_hour.to_string(),
                max: RATE_SCALE,
            });
        }
        Ok(Self(usd_per_hour))
    }

    pub fn from_usd(dollars: u32) -> Self {
        Self(Money::from_usd(dollars))
    }

    pub fn usd_per_hour(self) -> Money {
        self.0
    }

    fn cents(self) -> i64 {
        self.0.micros() / MICROS_PER_CENT
    }

    /// `hours * rate`; exact because hours resolve to 10^-4 h and rates to the cent.
    pub fn cost_of(self, hours: Hours) -> Result<Money> {
        hours
            .units()
            .checked_mul(self.cents())
            .ok_or(Error::Overflow("labor cost"))
            .and_then(Money::from_micros)
    }
}

impl FromStr for HourlyRate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cents = parse_scaled(s, RATE_SCALE)?;
        let micros = cents
            .checked_mul(i128::from(MICROS_PER_CENT))
            .ok_or(Error::Overflow("hourly rate"))?;
        HourlyRate::new(Money::from_micros_i128(micros, "hourly rate")?)
    }
}

impl fmt::Display for HourlyRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for HourlyRate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HourlyRate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = deserializer.deserialize_any(DecimalText)?;
        text.parse().map_err(de::Error::custom)
    }
}

/// Non-negative duration in hours with 10^-4 hour resolution.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Hours(i64);

impl Hours {
    pub const ZERO: Hours = Hours(0);

    pub fn from_units(units: i64) -> Result<Self> {
        if units < 0 {
            return Err(Error::Negative(format!("{units} ten-thousandths of an hour")));
        }
        Ok(Self(units))
    }

    pub fn whole(hours: u32) -> Self {
        Self(i64::from(hours) * HOUR_UNITS)
    }

    /// Nearest representable duration; negative or non-finite input is rejected.
    pub fn from_f64(hours: f64) -> Result<Self> {
        if !hours.is_finite() {
            return Err(Error::MalformedDecimal(hours.to_string()));
        }
        if hours < 0.0 {
            return Err(Error::Negative(hours.to_string()));
        }
        let units = (hours * HOUR_UNITS as f64).round();
        if units > i64::MAX as f64 {
            return Err(Error::Overflow("hours"));
        }
        Ok(Self(units as i64))
    }

    /// Count of 10^-4 hour units.
    pub fn units(self) -> i64 {
        self.0
    }

    pub fn as_rational(self) -> Rational {
        Rational::from_integer(i128::from(self.0))
            .checked_div(&Rational::from_integer(i128::from(HOUR_UNITS)))
            .expect("nonzero constant")
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / HOUR_UNITS as f64
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn checked_add(self, other: Hours) -> Result<Hours> {
        self.0
            .checked_add(other.0)
            .map(Hours)
            .ok_or(Error::Overflow("hours sum"))
    }

    pub fn checked_mul_count(self, count: u64) -> Result<Hours> {
        i64::try_from(count)
            .ok()
            .and_then(|c| self.0.checked_mul(c))
            .map(Hours)
            .ok_or(Error::Overflow("hours product"))
    }

    pub fn saturating_sub(self, other: Hours) -> Hours {
        Hours((self.0 - other.0).max(0))
    }
}

impl FromStr for Hours {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let units = parse_scaled(s, HOURS_SCALE)?;
        i64::try_from(units)
            .map(Hours)
            .map_err(|_| Error::Overflow("hours literal"))
    }
}

impl fmt::Display for Hours {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_scaled(i128::from(self.0), HOURS_SCALE))
    }
}

impl Serialize for Hours {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Hours {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = deserializer.deserialize_any(DecimalText)?;
        text.parse().map_err(de::Error::custom)
    }
}

/// Exact, possibly fractional, amount of money: a rational count of micro-dollars.
///
/// Unit costs such as `$20,000 / 48` are not representable in whole micro-dollars,
/// so they are kept exact here and only rounded on display.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExactMoney(Rational);

impl ExactMoney {
    pub fn from_micros(micros: Rational) -> Result<Self> {
        if micros.numerator() < 0 {
            return Err(Error::Negative(micros.to_string()));
        }
        Ok(Self(micros))
    }

    pub fn micros(&self) -> Rational {
        self.0
    }

    pub fn to_usd_f64(&self) -> f64 {
        self.0.to_f64() / MICROS_PER_USD as f64
    }

    /// USD value as an exact rational.
    pub fn usd(&self) -> Rational {
        self.0
            .checked_div(&Rational::from_integer(i128::from(MICROS_PER_USD)))
            .expect("nonzero constant")
    }
}

impl From<Money> for ExactMoney {
    fn from(value: Money) -> Self {
        Self(value.as_rational())
    }
}

#[derive(Serialize, Deserialize)]
struct ExactMoneyRepr {
    /// Dollars, as an exact decimal string.
    numerator: Money,
    denominator: i128,
    approx_usd: String,
}

impl Serialize for ExactMoney {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let numerator = Money::from_micros_i128(self.0.numerator(), "exact money numerator")
            .map_err(serde::ser::Error::custom)?;
        ExactMoneyRepr {
            numerator,
            denominator: self.0.denominator(),
            approx_usd: format!("{:.6}", self.to_usd_f64()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMoney {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ExactMoneyRepr::deserialize(deserializer)?;
        Rational::new(i128::from(repr.numerator.micros()), repr.denominator)
            .and_then(ExactMoney::from_micros)
            .map_err(de::Error::custom)
    }
}

/// Accepts a JSON string or number and yields its decimal text.
pub(crate) struct DecimalText;

impl<'de> Visitor<'de> for DecimalText {
    type Value = String;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a decimal number or decimal string")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<String, E> {
        Ok(v.to_string())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<String, E> {
        Ok(v.to_string())
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<String, E> {
        Ok(v.to_string())
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<String, E> {
        if !v.is_finite() {
            return Err(E::custom("non-finite number"));
        }
        Ok(format!("{v}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn money_from_usd_examples() {
        assert_eq!(Money::from_usd_str("20000").unwrap().micros(), 20_000_000_000);
        assert_eq!(Money::from_usd_str("0").unwrap().micros(), 0);
        assert_eq!(Money::from_usd_str("2.50").unwrap().micros(), 2_500_000);
    }

    #[test]
    fn money_rejects_bad_input() {
        assert!(matches!(Money::from_usd_str("-1"), Err(Error::Negative(_))));
        assert!(matches!(
            Money::from_usd_str("0.0000001"),
            Err(Error::TooManyFractionalDigits { .. })
        ));
        assert!(matches!(
            Money::from_usd_str("$5"),
            Err(Error::MalformedDecimal(_))
        ));
        assert!(Money::from_micros(-1).is_err());
    }

    #[test]
    fn money_renders_for_round_trip() {
        let m = Money::from_usd_str("2.50").unwrap();
        assert_eq!(m.to_string(), "2.5");
        assert_eq!(m.to_string().parse::<Money>().unwrap(), m);
        assert_eq!(serde_json::to_string(&m).unwrap(), "\"2.5\"");
        assert_eq!(serde_json::from_str::<Money>("7").unwrap(), Money::from_usd(7));
    }

    #[test]
    fn rates_are_quoted_to_the_cent() {
        assert!("100.25".parse::<HourlyRate>().is_ok());
        assert!("100.255".parse::<HourlyRate>().is_err());
        assert!(HourlyRate::new(Money::from_micros(1).unwrap()).is_err());
    }

    #[test]
    fn labor_cost_is_exact() {
        let rate = HourlyRate::from_usd(100);
        let half = "0.5".parse::<Hours>().unwrap();
        assert_eq!(rate.cost_of(half).unwrap(), Money::from_usd(50));
        let odd = "0.0001".parse::<Hours>().unwrap();
        let cents: HourlyRate = "0.01".parse().unwrap();
        assert_eq!(cents.cost_of(odd).unwrap().micros(), 1);
    }

    #[test]
    fn hours_parse_numbers_and_strings() {
        assert_eq!(
            serde_json::from_str::<Hours>("0.5").unwrap(),
            Hours::from_units(5000).unwrap()
        );
        assert_eq!(serde_json::from_str::<Hours>("\"2\"").unwrap(), Hours::whole(2));
        assert!(serde_json::from_str::<Hours>("-1").is_err());
        assert!(serde_json::from_str::<Hours>("0.00001").is_err());
    }

    #[test]
    fn exact_money_serializes_losslessly() {
        let unit = ExactMoney::from_micros(Rational::new(20_000_000_000, 48).unwrap()).unwrap();
        let json = serde_json::to_string(&unit).unwrap();
        let back: ExactMoney = serde_json::from_str(&json).unwrap();
        assert_eq!(back, unit);
    }
}
