//! Campaign cost formulas over exact scalar inputs.
//!
//! Total cost is `C_G + C_V + C_I + C_R + C_T`. Generation cost is
//! `q·(T_in·r_in + T_out·r_out) + C_tools`; each labor stage costs
//! `N·h·w`. Unit costs divide a cost numerator by the expected count of the
//! outcome being bought:
//!
//! | outcome           | numerator               | denominator   |
//! |-------------------|-------------------------|---------------|
//! | validated finding | C_G + C_V               | N_c·π_s       |
//! | impact-backed     | C_G + C_V + C_I         | N_c·π_s·π_e   |
//! | accepted          | C_G + C_V + C_R + C_T   | N_c·π_s       |
//!
//! `N_c` is the number of submitted reports and `π_s` the accepted fraction
//! among them. Denominators stay exact rationals; nothing is rounded until
//! display.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    CostBreakdown, ExactMoney, Fraction, GenerationProfile, Money, Rational, StageEffort, TokenPricing,
};

const TOKENS_PER_MILLION: i128 = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    ValidatedFinding,
    ImpactBacked,
    Accepted,
    HighSeverity,
    /// Per reported finding, when acceptance is unknown (treats every report as valid).
    ReportedFinding,
}

impl OutcomeKind {
    pub fn label(self) -> &'static str {
        match self {
            OutcomeKind::ValidatedFinding => "cost per validated finding",
            OutcomeKind::ImpactBacked => "cost per impact-backed finding",
            OutcomeKind::Accepted => "cost per accepted finding",
            OutcomeKind::HighSeverity => "cost per high-severity finding",
            OutcomeKind::ReportedFinding => "cost per reported finding",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            OutcomeKind::ValidatedFinding => "validated_finding",
            OutcomeKind::ImpactBacked => "impact_backed",
            OutcomeKind::Accepted => "accepted",
            OutcomeKind::HighSeverity => "high_severity",
            OutcomeKind::ReportedFinding => "reported_finding",
        }
    }

    fn undefined_reason(self) -> &'static str {
        match self {
            OutcomeKind::ValidatedFinding => "no validated findings",
            OutcomeKind::ImpactBacked => "no impact-backed findings",
            OutcomeKind::Accepted => "no accepted findings",
            OutcomeKind::HighSeverity => "no high-severity findings",
            OutcomeKind::ReportedFinding => "no reported findings",
        }
    }
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A unit cost with the exact numerator and denominator it came from.
///
/// `unit_cost × denominator == numerator` holds exactly.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct UnitCostResult {
    pub outcome: OutcomeKind,
    pub numerator: Money,
    pub denominator: Rational,
    pub unit_cost: ExactMoney,
}

/// Divides `numerator` by an expected outcome count.
pub fn unit_cost(outcome: OutcomeKind, numerator: Money, denominator: Rational) -> Result<UnitCostResult> {
    if !denominator.is_positive() {
        return Err(Error::UndefinedUnitCost(outcome.undefined_reason()));
    }
    let unit = numerator.as_rational().checked_div(&denominator)?;
    Ok(UnitCostResult {
        outcome,
        numerator,
        denominator,
        unit_cost: ExactMoney::from_micros(unit)?,
    })
}

/// `q·(T_in·r_in + T_out·r_out) + C_tools` with token rates per million tokens.
///
/// Token charges below one micro-dollar are rounded half away from zero;
/// whole-cent-per-million prices with whole token counts are always exact.
pub fn generation_cost(profile: &GenerationProfile, pricing: &TokenPricing) -> Result<Money> {
    let overflow = || Error::Overflow("generation cost");
    let per_run = i128::from(profile.input_tokens_per_run)
        .checked_mul(i128::from(pricing.input_per_million.micros()))
        .and_then(|a| {
            i128::from(profile.output_tokens_per_run)
                .checked_mul(i128::from(pricing.output_per_million.micros()))
                .and_then(|b| a.checked_add(b))
        })
        .ok_or_else(overflow)?;
    let scaled = per_run
        .checked_mul(i128::from(profile.runs))
        .ok_or_else(overflow)?;
    let tokens_micros = (scaled + TOKENS_PER_MILLION / 2) / TOKENS_PER_MILLION;
    let tokens = Money::from_micros_i128(tokens_micros, "generation cost")?;
    tokens.checked_add(profile.tools_cost)
}

/// `N·h·w` for one labor stage.
pub fn stage_cost(item_count: u64, effort: &StageEffort) -> Result<Money> {
    let hours = effort.hours_per_item.checked_mul_count(item_count)?;
    effort.rate.cost_of(hours)
}

/// `C_G + C_V + C_I + C_R + C_T`.
pub fn total_cost(breakdown: &CostBreakdown) -> Result<Money> {
    [breakdown.c_v, breakdown.c_i, breakdown.c_r, breakdown.c_t]
        .into_iter()
        .try_fold(breakdown.c_g, Money::checked_add)
}

fn expected_count(n_c: u64, fractions: &[Fraction]) -> Result<Rational> {
    fractions
        .iter()
        .try_fold(Rational::from_integer(i128::from(n_c)), |acc, f| {
            acc.checked_mul(&f.as_rational())
        })
}

fn sum(parts: &[Money]) -> Result<Money> {
    parts.iter().try_fold(Money::ZERO, |acc, m| acc.checked_add(*m))
}

/// `(C_G + C_V) / (N_c·π_s)`; the numerator is the cost of producing validated findings.
pub fn cost_per_validated_finding(
    c_g: Money,
    c_v: Money,
    n_c: u64,
    pi_s: Fraction,
) -> Result<UnitCostResult> {
    unit_cost(
        OutcomeKind::ValidatedFinding,
        sum(&[c_g, c_v])?,
        expected_count(n_c, &[pi_s])?,
    )
}

/// `(C_G + C_V + C_I) / (N_c·π_s·π_e)`.
pub fn cost_per_impact_backed(
    c_g: Money,
    c_v: Money,
    c_i: Money,
    n_c: u64,
    pi_s: Fraction,
    pi_e: Fraction,
) -> Result<UnitCostResult> {
    unit_cost(
        OutcomeKind::ImpactBacked,
        sum(&[c_g, c_v, c_i])?,
        expected_count(n_c, &[pi_s, pi_e])?,
    )
}

/// `(C_G + C_V + C_R + C_T) / (N_c·π_s)`.
pub fn cost_per_accepted(
    c_g: Money,
    c_v: Money,
    c_r: Money,
    c_t: Money,
    n_c: u64,
    pi_s: Fraction,
) -> Result<UnitCostResult> {
    unit_cost(
        OutcomeKind::Accepted,
        sum(&[c_g, c_v, c_r, c_t])?,
        expected_count(n_c, &[pi_s])?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{HourlyRate, Hours, Stage};

    fn usd(s: &str) -> Money {
        s.parse().unwrap()
    }

    fn frac(n: u64, d: u64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    fn cents(r: &UnitCostResult) -> i128 {
        // unit cost in hundredths of a dollar, rounded half away from zero
        r.unit_cost
            .micros()
            .checked_div(&Rational::from_integer(10_000))
            .unwrap()
            .round_half_away()
    }

    fn effort(hours: &str, rate: u32) -> StageEffort {
        StageEffort {
            stage: Stage::Validation,
            hours_per_item: hours.parse::<Hours>().unwrap(),
            rate: HourlyRate::from_usd(rate),
        }
    }

    #[test]
    fn generation_cost_examples() {
        let opus = TokenPricing::opus_4_6();
        let one_million_in = GenerationProfile {
            runs: 1,
            input_tokens_per_run: 1_000_000,
            output_tokens_per_run: 0,
            tools_cost: Money::ZERO,
        };
        assert_eq!(generation_cost(&one_million_in, &opus).unwrap(), usd("5"));

        let no_runs = GenerationProfile {
            runs: 0,
            input_tokens_per_run: 123_456,
            output_tokens_per_run: 654_321,
            tools_cost: usd("100"),
        };
        assert_eq!(generation_cost(&no_runs, &opus).unwrap(), usd("100"));

        let campaign = GenerationProfile {
            runs: 1000,
            input_tokens_per_run: 200_000,
            output_tokens_per_run: 20_000,
            tools_cost: usd("500"),
        };
        // 1000 × (0.2 × 5 + 0.02 × 25) + 500
        assert_eq!(generation_cost(&campaign, &opus).unwrap(), usd("2000"));
    }

    #[test]
    fn generation_cost_overflow_is_reported() {
        let profile = GenerationProfile {
            runs: u64::MAX,
            input_tokens_per_run: u64::MAX,
            output_tokens_per_run: 0,
            tools_cost: Money::ZERO,
        };
        assert!(matches!(
            generation_cost(&profile, &TokenPricing::opus_4_6()),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn stage_cost_examples() {
        assert_eq!(stage_cost(112, &effort("0.5", 100)).unwrap(), usd("5600"));
        assert_eq!(stage_cost(112, &effort("2", 250)).unwrap(), usd("56000"));
        assert_eq!(stage_cost(0, &effort("2", 250)).unwrap(), Money::ZERO);
    }

    #[test]
    fn total_cost_examples() {
        let single = CostBreakdown {
            c_g: usd("20000"),
            ..CostBreakdown::default()
        };
        assert_eq!(total_cost(&single).unwrap(), usd("20000"));
        assert_eq!(total_cost(&CostBreakdown::default()).unwrap(), Money::ZERO);
        let bands = CostBreakdown {
            c_g: usd("5000"),
            c_v: usd("5600"),
            ..CostBreakdown::default()
        };
        assert_eq!(total_cost(&bands).unwrap(), usd("10600"));
    }

    #[test]
    fn validated_finding_examples() {
        let mythos = cost_per_validated_finding(usd("20000"), Money::ZERO, 48, Fraction::one()).unwrap();
        assert_eq!(cents(&mythos), 41_667);
        assert_eq!(mythos.numerator, usd("20000"));

        let low_gen = cost_per_validated_finding(usd("5000"), Money::ZERO, 112, frac(22, 112)).unwrap();
        assert_eq!(cents(&low_gen), 22_727);

        let low_val = cost_per_validated_finding(Money::ZERO, usd("5600"), 112, frac(22, 112)).unwrap();
        assert_eq!(cents(&low_val), 25_455);
    }

    #[test]
    fn impact_backed_examples() {
        // $4,000 over two impact-backed outcomes
        let exploit = cost_per_impact_backed(
            usd("4000"),
            Money::ZERO,
            Money::ZERO,
            2,
            Fraction::one(),
            Fraction::one(),
        )
        .unwrap();
        assert_eq!(exploit.unit_cost, ExactMoney::from(usd("2000")));

        let v = cost_per_validated_finding(usd("300"), usd("200"), 10, frac(1, 2)).unwrap();
        let i = cost_per_impact_backed(
            usd("300"),
            usd("200"),
            Money::ZERO,
            10,
            frac(1, 2),
            Fraction::one(),
        )
        .unwrap();
        assert_eq!(v.unit_cost, i.unit_cost);

        let hand =
            cost_per_impact_backed(usd("600"), usd("300"), usd("100"), 100, frac(1, 5), frac(1, 2)).unwrap();
        assert_eq!(hand.unit_cost, ExactMoney::from(usd("100")));
    }

    #[test]
    fn accepted_examples() {
        let a = cost_per_accepted(
            usd("5000"),
            usd("5600"),
            Money::ZERO,
            Money::ZERO,
            112,
            frac(22, 112),
        )
        .unwrap();
        assert_eq!(cents(&a), 48_182);
        let reduced = cost_per_accepted(
            usd("20000"),
            Money::ZERO,
            Money::ZERO,
            Money::ZERO,
            24,
            Fraction::one(),
        )
        .unwrap();
        assert_eq!(cents(&reduced), 83_333);
        let upper = cost_per_accepted(
            usd("20000"),
            usd("56000"),
            Money::ZERO,
            Money::ZERO,
            112,
            frac(22, 112),
        )
        .unwrap();
        assert_eq!(cents(&upper), 345_455);
    }

    #[test]
    fn zero_denominators_are_errors() {
        let e = cost_per_validated_finding(usd("1"), Money::ZERO, 0, Fraction::one()).unwrap_err();
        assert_eq!(e.to_string(), "unit cost undefined: no validated findings");
        let e = cost_per_impact_backed(
            usd("1"),
            Money::ZERO,
            Money::ZERO,
            5,
            Fraction::one(),
            Fraction::zero(),
        )
        .unwrap_err();
        assert_eq!(e.to_string(), "unit cost undefined: no impact-backed findings");
        let e = cost_per_accepted(
            usd("1"),
            Money::ZERO,
            Money::ZERO,
            Money::ZERO,
            5,
            Fraction::zero(),
        )
        .unwrap_err();
        assert_eq!(e.to_string(), "unit cost undefined: no accepted findings");
    }

    #[test]
    fn unit_cost_times_denominator_is_numerator() {
        let r = cost_per_validated_finding(usd("20000"), Money::ZERO, 48, Fraction::one()).unwrap();
        let back = r.unit_cost.micros().checked_mul(&r.denominator).unwrap();
        assert_eq!(back, r.numerator.as_rational());
    }
}
