use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{interval_add, interval_div, interval_mul, UncertainParam};
use crate::error::{Error, Result};
use crate::model::{Interval, Unit};

/// Arithmetic shared by scalar sampling and interval lifting.
pub(crate) trait Arith: Copy {
    fn add(self, other: Self) -> Result<Self>;
    fn mul(self, other: Self) -> Result<Self>;
    fn div(self, other: Self) -> Result<Self>;
    fn div_const(self, k: f64) -> Result<Self>;
}

impl Arith for f64 {
    fn add(self, other: Self) -> Result<Self> {
        Ok(self + other)
    }

    fn mul(self, other: Self) -> Result<Self> {
        Ok(self * other)
    }

    fn div(self, other: Self) -> Result<Self> {
        if other <= 0.0 {
            return Err(Error::DivisionByZeroInterval);
        }
        Ok(self / other)
    }

    fn div_const(self, k: f64) -> Result<Self> {
        Ok(self / k)
    }
}

impl Arith for Interval {
    fn add(self, other: Self) -> Result<Self> {
        interval_add(&self, &other)
    }

    fn mul(self, other: Self) -> Result<Self> {
        interval_mul(&self, &other)
    }

    fn div(self, other: Self) -> Result<Self> {
        interval_div(&self, &other)
    }

    fn div_const(self, k: f64) -> Result<Self> {
        Interval::new(self.lo() / k, self.hi() / k, self.unit())
    }
}

/// Cost formulas that can be evaluated under uncertainty.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostTarget {
    GenerationCost,
    StageCost,
    TotalCost,
    CostPerValidatedFinding,
    CostPerImpactBacked,
    CostPerAccepted,
}

/// A labor component given either directly (`c_v`) or as hours × rate (`h_v`, `w_v`).
struct Component {
    cost: &'static str,
    hours: &'static str,
    rate: &'static str,
}

const C_V: Component = Component {
    cost: "c_v",
    hours: "h_v",
    rate: "w_v",
};
const C_I: Component = Component {
    cost: "c_i",
    hours: "h_i",
    rate: "w_i",
};
const C_R: Component = Component {
    cost: "c_r",
    hours: "h_r",
    rate: "w_r",
};
const C_T: Component = Component {
    cost: "c_t",
    hours: "h_t",
    rate: "w_t",
};

impl CostTarget {
    pub const ALL: [CostTarget; 6] = [
        CostTarget::GenerationCost,
        CostTarget::StageCost,
        CostTarget::TotalCost,
        CostTarget::CostPerValidatedFinding,
        CostTarget::CostPerImpactBacked,
        CostTarget::CostPerAccepted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CostTarget::GenerationCost => "generation_cost",
            CostTarget::StageCost => "stage_cost",
            CostTarget::TotalCost => "total_cost",
            CostTarget::CostPerValidatedFinding => "cost_per_validated_finding",
            CostTarget::CostPerImpactBacked => "cost_per_impact_backed",
            CostTarget::CostPerAccepted => "cost_per_accepted",
        }
    }

    fn components(self) -> &'static [Component] {
        match self {
            CostTarget::CostPerValidatedFinding => &[C_V],
            CostTarget::CostPerImpactBacked => &[C_V, C_I],
            CostTarget::CostPerAccepted => &[C_V, C_R, C_T],
            _ => &[],
        }
    }

    /// Every parameter name this target accepts, with its unit.
    pub fn parameters(self) -> Vec<(&'static str, Unit)> {
        use Unit::*;
        let mut params = match self {
            CostTarget::GenerationCost => vec![
                ("runs", Count),
                ("input_tokens", Count),
                ("output_tokens", Count),
                ("input_price", Money),
                ("output_price", Money),
                ("tools_cost", Money),
            ],
            CostTarget::StageCost => vec![
                ("item_count", Count),
                ("hours_per_item", Hours),
                ("hourly_rate", Rate),
            ],
            CostTarget::TotalCost => vec![
                ("c_g", Money),
                ("c_v", Money),
                ("c_i", Money),
                ("c_r", Money),
                ("c_t", Money),
            ],
            CostTarget::CostPerValidatedFinding => vec![("c_g", Money), ("n_c", Count), ("pi_s", Fraction)],
            CostTarget::CostPerImpactBacked => vec![
                ("c_g", Money),
                ("n_c", Count),
                ("pi_s", Fraction),
                ("pi_e", Fraction),
            ],
            CostTarget::CostPerAccepted => vec![("c_g", Money), ("n_c", Count), ("pi_s", Fraction)],
        };
        for c in self.components() {
            params.push((c.cost, Money));
            params.push((c.hours, Hours));
            params.push((c.rate, Rate));
        }
        params
    }

    pub fn unit_of(self, param: &str) -> Option<Unit> {
        self.parameters()
            .into_iter()
            .find(|(n, _)| *n == param)
            .map(|(_, u)| u)
    }

    /// Checks names and units; each labor component must be given exactly one way.
    pub fn check_params(self, params: &BTreeMap<String, UncertainParam>) -> Result<()> {
        for (name, p) in params {
            let unit = self.unit_of(name).ok_or_else(|| Error::UnknownParameter {
                param: name.clone(),
                target: self.name(),
            })?;
            if p.interval.unit() != unit {
                return Err(Error::UnitMismatch {
                    op: "bind",
                    left: p.interval.unit().name(),
                    right: unit.name(),
                });
            }
        }
        let missing = |param: &str| Error::MissingParameter {
            param: param.to_string(),
            target: self.name(),
        };
        let components = self.components();
        for (name, _) in self.parameters() {
            let in_component = components
                .iter()
                .any(|c| c.cost == name || c.hours == name || c.rate == name);
            if !in_component && !params.contains_key(name) {
                return Err(missing(name));
            }
        }
        for c in components {
            let direct = params.contains_key(c.cost);
            let hours = params.contains_key(c.hours);
            let rate = params.contains_key(c.rate);
            match (direct, hours, rate) {
                (true, false, false) | (false, true, true) => {}
                (false, false, false) => return Err(missing(c.cost)),
                (true, _, _) => {
                    return Err(Error::InvalidDistribution {
                        param: c.cost.to_string(),
                        reason: format!("give either {} or {} and {}, not both", c.cost, c.hours, c.rate),
                    })
                }
                (false, false, true) => return Err(missing(c.hours)),
                (false, true, false) => return Err(missing(c.rate)),
            }
        }
        Ok(())
    }

    /// Evaluates the formula. Each variable appears so that every term is
    /// monotone in its arguments, which keeps lifted intervals tight.
    pub(crate) fn evaluate<T: Arith>(self, get: &dyn Fn(&str) -> Option<T>) -> Result<T> {
        let need = |name: &str| -> Result<T> {
            get(name).ok_or_else(|| Error::MissingParameter {
                param: name.to_string(),
                target: self.name(),
            })
        };
        match self {
            CostTarget::GenerationCost => {
                let tokens_in = need("input_tokens")?.mul(need("input_price")?)?;
                let tokens_out = need("output_tokens")?.mul(need("output_price")?)?;
                need("runs")?
                    .mul(tokens_in.add(tokens_out)?)?
                    .div_const(1_000_000.0)?
                    .add(need("tools_cost")?)
            }
            CostTarget::StageCost => need("item_count")?
                .mul(need("hours_per_item")?)?
                .mul(need("hourly_rate")?),
            CostTarget::TotalCost => ["c_v", "c_i", "c_r", "c_t"]
                .iter()
                .try_fold(need("c_g")?, |acc, n| acc.add(need(n)?)),
            CostTarget::CostPerValidatedFinding => {
                let pi_s = need("pi_s")?;
                let denom = need("n_c")?.mul(pi_s)?;
                self.amortize(&get, &need, denom, |c| match c {
                    "c_v" => Some(vec![pi_s]),
                    _ => None,
                })
            }
            CostTarget::CostPerImpactBacked => {
                let pi_s = need("pi_s")?;
                let pi_e = need("pi_e")?;
                let denom = need("n_c")?.mul(pi_s)?.mul(pi_e)?;
                self.amortize(&get, &need, denom, |c| match c {
                    // N_c·h_v·w_v / (N_c·π_s·π_e)
                    "c_v" => Some(vec![pi_s, pi_e]),
                    // N_s·h_i·w_i / (N_s·π_e)
                    "c_i" => Some(vec![pi_e]),
                    _ => None,
                })
            }
            CostTarget::CostPerAccepted => {
                let pi_s = need("pi_s")?;
                let denom = need("n_c")?.mul(pi_s)?;
                self.amortize(&get, &need, denom, |c| match c {
                    "c_v" => Some(vec![pi_s]),
                    _ => Some(vec![]),
                })
            }
        }
    }

    /// Sums direct costs over `denom`, plus per-item hours × rate terms for
    /// decomposed components, each divided by the listed fractions.
    fn amortize<T: Arith>(
        self,
        get: &dyn Fn(&str) -> Option<T>,
        need: &dyn Fn(&str) -> Result<T>,
        denom: T,
        per_item_divisors: impl Fn(&str) -> Option<Vec<T>>,
    ) -> Result<T> {
        let mut direct = need("c_g")?;
        let mut per_item: Vec<T> = Vec::new();
        for c in self.components() {
            if let Some(v) = get(c.cost) {
                direct = direct.add(v)?;
            } else {
                let mut term = need(c.hours)?.mul(need(c.rate)?)?;
                for d in per_item_divisors(c.cost).unwrap_or_default() {
                    term = term.div(d)?;
                }
                per_item.push(term);
            }
        }
        per_item
            .into_iter()
            .try_fold(direct.div(denom)?, |acc, t| acc.add(t))
    }
}

impl fmt::Display for CostTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CostTarget::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownTarget(s.to_string()))
    }
}

/// Evaluates `target` with interval arithmetic over every parameter's range.
pub fn lift_cost_model(target: CostTarget, params: &BTreeMap<String, UncertainParam>) -> Result<Interval> {
    target.check_params(params)?;
    let get = |name: &str| params.get(name).map(|p| p.interval);
    target.evaluate::<Interval>(&get)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[(&str, f64, f64, Unit)]) -> BTreeMap<String, UncertainParam> {
        items
            .iter()
            .map(|&(n, lo, hi, u)| (n.to_string(), UncertainParam::uniform(n, lo, hi, u).unwrap()))
            .collect()
    }

    #[test]
    fn lifted_generation_band_per_accepted() {
        let p = set(&[
            ("c_g", 5000.0, 20000.0, Unit::Money),
            ("c_v", 0.0, 0.0, Unit::Money),
            ("n_c", 112.0, 112.0, Unit::Count),
            ("pi_s", 22.0 / 112.0, 22.0 / 112.0, Unit::Fraction),
        ]);
        let i = lift_cost_model(CostTarget::CostPerValidatedFinding, &p).unwrap();
        assert!((i.lo() - 227.27).abs() < 0.01, "{}", i.lo());
        assert!((i.hi() - 909.09).abs() < 0.01, "{}", i.hi());
        assert_eq!(i.unit(), Unit::Money);
    }

    #[test]
    fn lifted_generation_band_per_high() {
        let p = set(&[
            ("c_g", 5000.0, 20000.0, Unit::Money),
            ("c_v", 0.0, 0.0, Unit::Money),
            ("n_c", 112.0, 112.0, Unit::Count),
            ("pi_s", 0.125, 0.125, Unit::Fraction),
        ]);
        let i = lift_cost_model(CostTarget::CostPerValidatedFinding, &p).unwrap();
        assert!((i.lo() - 357.14).abs() < 0.01);
        assert!((i.hi() - 1428.57).abs() < 0.01);
    }

    #[test]
    fn decomposed_validation_matches_direct() {
        let direct = set(&[
            ("c_g", 0.0, 0.0, Unit::Money),
            ("c_v", 5600.0, 56000.0, Unit::Money),
            ("n_c", 112.0, 112.0, Unit::Count),
            ("pi_s", 0.125, 0.125, Unit::Fraction),
        ]);
        let decomposed = set(&[
            ("c_g", 0.0, 0.0, Unit::Money),
            ("h_v", 0.5, 2.0, Unit::Hours),
            ("w_v", 100.0, 250.0, Unit::Rate),
            ("n_c", 112.0, 112.0, Unit::Count),
            ("pi_s", 0.125, 0.125, Unit::Fraction),
        ]);
        let a = lift_cost_model(CostTarget::CostPerValidatedFinding, &direct).unwrap();
        let b = lift_cost_model(CostTarget::CostPerValidatedFinding, &decomposed).unwrap();
        assert_eq!((a.lo(), a.hi()), (400.0, 4000.0));
        assert_eq!((b.lo(), b.hi()), (400.0, 4000.0));
    }

    #[test]
    fn parameter_checks() {
        let mut p = set(&[("c_g", 1.0, 2.0, Unit::Money), ("n_c", 1.0, 1.0, Unit::Count)]);
        assert!(matches!(
            lift_cost_model(CostTarget::CostPerValidatedFinding, &p),
            Err(Error::MissingParameter { .. })
        ));
        p.extend(set(&[
            ("pi_s", 1.0, 1.0, Unit::Fraction),
            ("c_v", 0.0, 0.0, Unit::Money),
        ]));
        assert!(lift_cost_model(CostTarget::CostPerValidatedFinding, &p).is_ok());
        p.extend(set(&[("h_v", 1.0, 1.0, Unit::Hours)]));
        assert!(lift_cost_model(CostTarget::CostPerValidatedFinding, &p).is_err());
        let wrong_unit = set(&[("item_count", 1.0, 1.0, Unit::Money)]);
        assert!(matches!(
            lift_cost_model(CostTarget::StageCost, &wrong_unit),
            Err(Error::UnitMismatch { .. })
        ));
        let unknown = set(&[("bogus", 1.0, 1.0, Unit::Money)]);
        assert!(matches!(
            lift_cost_model(CostTarget::TotalCost, &unknown),
            Err(Error::UnknownParameter { .. })
        ));
    }

    #[test]
    fn zero_touching_divisor_is_rejected() {
        let p = set(&[
            ("c_g", 1.0, 2.0, Unit::Money),
            ("c_v", 0.0, 0.0, Unit::Money),
            ("n_c", 0.0, 10.0, Unit::Count),
            ("pi_s", 1.0, 1.0, Unit::Fraction),
        ]);
        assert!(matches!(
            lift_cost_model(CostTarget::CostPerValidatedFinding, &p),
            Err(Error::DivisionByZeroInterval)
        ));
    }
}
