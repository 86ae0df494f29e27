//! Uncertainty propagation through the cost model.
//!
//! Interval arithmetic gives guaranteed ranges; seeded Monte Carlo gives the
//! distribution inside them. Both evaluate the same formula code, so every
//! Monte Carlo sample lies inside the lifted interval. Quantities are
//! non-negative throughout, so products and quotients are endpoint-wise.

mod formula;
mod monte_carlo;
mod study;

use rand::Rng;
use rand_distr::{Distribution as _, Triangular};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Interval, Unit};

pub use formula::{lift_cost_model, CostTarget};
pub use monte_carlo::{
    monte_carlo, monte_carlo_samples, monte_carlo_with_workers, McSummary, DEFAULT_SAMPLES,
};
pub(crate) use study::DocumentRepr;
pub use study::{run_study, ParamSet, SensitivityDocument, SensitivityStudy, StudyResult};

fn mul_unit(a: Unit, b: Unit) -> Result<Unit> {
    use Unit::*;
    match (a, b) {
        (Count, Count) | (Count, Fraction) | (Fraction, Count) => Ok(Count),
        (Fraction, Fraction) => Ok(Fraction),
        (x, d) | (d, x) if d.is_dimensionless() && !x.is_dimensionless() => Ok(x),
        (Hours, Rate) | (Rate, Hours) => Ok(Money),
        _ => Err(Error::UnitMismatch {
            op: "multiply",
            left: a.name(),
            right: b.name(),
        }),
    }
}

fn div_unit(a: Unit, b: Unit) -> Result<Unit> {
    use Unit::*;
    match (a, b) {
        (Count, Count) | (Fraction, Count) | (Fraction, Fraction) => Ok(Fraction),
        (Count, Fraction) => Ok(Count),
        (x, d) if d.is_dimensionless() => Ok(x),
        (Money, Hours) => Ok(Rate),
        (Money, Rate) => Ok(Hours),
        (x, y) if x == y => Ok(Fraction),
        _ => Err(Error::UnitMismatch {
            op: "divide",
            left: a.name(),
            right: b.name(),
        }),
    }
}

/// `[a.lo + b.lo, a.hi + b.hi]`; units must agree.
pub fn interval_add(a: &Interval, b: &Interval) -> Result<Interval> {
    if a.unit() != b.unit() {
        return Err(Error::UnitMismatch {
            op: "add",
            left: a.unit().name(),
            right: b.unit().name(),
        });
    }
    Interval::new(a.lo() + b.lo(), a.hi() + b.hi(), a.unit())
}

/// `[a.lo·b.lo, a.hi·b.hi]` for non-negative intervals.
pub fn interval_mul(a: &Interval, b: &Interval) -> Result<Interval> {
    if a.lo() < 0.0 || b.lo() < 0.0 {
        return Err(Error::NegativeEndpoint);
    }
    let unit = mul_unit(a.unit(), b.unit())?;
    Interval::new(a.lo() * b.lo(), a.hi() * b.hi(), unit)
}

/// `[a.lo / b.hi, a.hi / b.lo]`; the divisor must be strictly positive.
pub fn interval_div(a: &Interval, b: &Interval) -> Result<Interval> {
    if b.lo() <= 0.0 {
        return Err(Error::DivisionByZeroInterval);
    }
    if a.lo() < 0.0 {
        return Err(Error::NegativeEndpoint);
    }
    let unit = div_unit(a.unit(), b.unit())?;
    Interval::new(a.lo() / b.hi(), a.hi() / b.lo(), unit)
}

/// Sampling distribution over a parameter's interval.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    #[default]
    Uniform,
    Triangular {
        mode: f64,
    },
    Point,
}

impl Distribution {
    pub fn validate(&self, name: &str, interval: &Interval) -> Result<()> {
        let invalid = |reason: String| Error::InvalidDistribution {
            param: name.to_string(),
            reason,
        };
        match *self {
            Distribution::Uniform => Ok(()),
            Distribution::Triangular { mode } => {
                if interval.contains(mode) {
                    Ok(())
                } else {
                    Err(invalid(format!(
                        "mode {mode} outside [{}, {}]",
                        interval.lo(),
                        interval.hi()
                    )))
                }
            }
            Distribution::Point => {
                if interval.is_point() {
                    Ok(())
                } else {
                    Err(invalid("point distribution requires lo = hi".into()))
                }
            }
        }
    }

    /// Draws a value clamped into `[lo, hi]`. Point draws consume no randomness.
    pub fn sample<R: Rng + ?Sized>(&self, lo: f64, hi: f64, rng: &mut R) -> f64 {
        if lo == hi {
            return lo;
        }
        let x = match *self {
            Distribution::Uniform => rng.random_range(lo..=hi),
            Distribution::Triangular { mode } => match Triangular::new(lo, hi, mode) {
                Ok(t) => t.sample(rng),
                Err(_) => lo,
            },
            Distribution::Point => lo,
        };
        x.clamp(lo, hi)
    }
}

/// A named uncertain input.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct UncertainParam {
    pub name: String,
    pub interval: Interval,
    pub distribution: Distribution,
}

impl UncertainParam {
    pub fn new(name: impl Into<String>, interval: Interval, distribution: Distribution) -> Result<Self> {
        let name = name.into();
        distribution.validate(&name, &interval)?;
        Ok(Self {
            name,
            interval,
            distribution,
        })
    }

    pub fn uniform(name: impl Into<String>, lo: f64, hi: f64, unit: Unit) -> Result<Self> {
        Self::new(name, Interval::new(lo, hi, unit)?, Distribution::Uniform)
    }

    pub fn point(name: impl Into<String>, value: f64, unit: Unit) -> Result<Self> {
        Self::new(name, Interval::point(value, unit)?, Distribution::Point)
    }
}
