//! Derived campaign quantities: precision, reviewer burden and unit costs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cost::{
    cost_per_accepted, cost_per_impact_backed, cost_per_validated_finding, unit_cost, OutcomeKind,
    UnitCostResult,
};
use crate::error::{Error, Result};
use crate::lint::{
    has_fatal, validate_campaign_report, BoundKind, CampaignReport, ContextValue, Count, Expenditure,
    MoneyRange,
};
use crate::model::{Fraction, FunnelCounts, HourlyRate, Hours, Interval, Money, Rational, Unit};
use crate::sensitivity::interval_div;

/// A unit cost whose denominator is only known as a range.
///
/// `low` divides by the largest count and `high` by the smallest.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct UnitCostRange {
    pub outcome: OutcomeKind,
    pub count: Count,
    pub low: UnitCostResult,
    pub high: UnitCostResult,
    pub interval: Interval,
}

#[derive(Clone, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct MetricsSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub campaign_id: Option<String>,
    pub precision: Option<Fraction>,
    /// High-severity findings over submitted reports.
    pub high_severity_fraction: Option<Fraction>,
    pub reports_per_accepted: Option<Rational>,
    pub reports_per_high: Option<Rational>,
    pub unit_costs: Vec<UnitCostResult>,
    pub unit_cost_ranges: Vec<UnitCostRange>,
    pub fixes_per_maintainer_hour: Option<Rational>,
    /// True when the cost basis is the upper end of a reported range.
    pub cost_is_upper_bound: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub context: BTreeMap<String, ContextValue>,
}

impl MetricsSummary {
    pub fn unit_cost(&self, outcome: OutcomeKind) -> Option<&UnitCostResult> {
        self.unit_costs.iter().find(|u| u.outcome == outcome)
    }

    pub fn unit_cost_range(&self, outcome: OutcomeKind) -> Option<&UnitCostRange> {
        self.unit_cost_ranges.iter().find(|u| u.outcome == outcome)
    }
}

fn ratio(n: u64, d: u64) -> Option<Rational> {
    (d > 0).then(|| Rational::new(i128::from(n), i128::from(d)).expect("positive denominator"))
}

/// Precision, high-severity fraction and reports per accepted/high finding.
pub fn funnel_metrics(counts: &FunnelCounts) -> Result<MetricsSummary> {
    let submitted = counts.submitted_reports();
    if submitted == 0 {
        return Err(Error::NoSubmittedReports);
    }
    let accepted = counts.accepted_findings();
    Ok(MetricsSummary {
        precision: Some(Fraction::new(accepted, submitted)?),
        high_severity_fraction: counts
            .high_severity()
            .map(|h| Fraction::new(h, submitted))
            .transpose()?,
        reports_per_accepted: ratio(submitted, accepted),
        reports_per_high: counts.high_severity().and_then(|h| ratio(submitted, h)),
        ..MetricsSummary::default()
    })
}

/// Accepted fixes shipped per maintainer hour consumed.
pub fn fixes_per_maintainer_hour(accepted_fixed: u64, maintainer_hours: Hours) -> Result<Rational> {
    if maintainer_hours.units() <= 0 {
        return Err(Error::NonPositiveHours);
    }
    Rational::from_integer(i128::from(accepted_fixed)).checked_div(&maintainer_hours.as_rational())
}

struct Labor {
    c_v: Money,
    c_i: Money,
    c_r: Money,
    c_t: Money,
}

fn priced(rate: Option<HourlyRate>, hours: Option<Hours>) -> Result<Money> {
    match (rate, hours) {
        (Some(rate), Some(h)) => rate.cost_of(h),
        _ => Ok(Money::ZERO),
    }
}

fn labor(report: &CampaignReport) -> Result<Labor> {
    let rate = report.labor_rate;
    Ok(Labor {
        c_v: priced(rate, report.validation_hours)?,
        c_i: priced(rate, report.impact_hours)?,
        c_r: priced(rate, report.remediation_hours)?,
        c_t: priced(rate, report.maintainer_review_hours)?,
    })
}

fn sum(parts: &[Money]) -> Result<Money> {
    parts.iter().try_fold(Money::ZERO, |a, m| a.checked_add(*m))
}

fn count_rational(n: u64) -> Rational {
    Rational::from_integer(i128::from(n))
}

fn range_of(outcome: OutcomeKind, numerator: Money, count: Count) -> Result<UnitCostRange> {
    let low = unit_cost(outcome, numerator, count_rational(count.hi()))?;
    let high = unit_cost(outcome, numerator, count_rational(count.lo()))?;
    let interval = interval_div(
        &Interval::point(numerator.to_usd_f64(), Unit::Money)?,
        &count.as_interval(),
    )?;
    Ok(UnitCostRange {
        outcome,
        count,
        low,
        high,
        interval,
    })
}

/// Unit costs for every outcome whose inputs the report supplies.
///
/// With `strict`, an outcome whose count is zero is an error; otherwise it is
/// left out of the result.
pub fn campaign_unit_costs(
    report: &CampaignReport,
    strict: bool,
) -> Result<(Vec<UnitCostResult>, Vec<UnitCostRange>)> {
    let mut exact = Vec::new();
    let mut ranges = Vec::new();
    let Some(expenditure) = report.total_expenditure else {
        return Ok((exact, ranges));
    };
    let c_g = expenditure.basis();
    let l = labor(report)?;

    let keep = |r: Result<UnitCostResult>, out: &mut Vec<UnitCostResult>| -> Result<()> {
        match r {
            Ok(u) => out.push(u),
            Err(Error::UndefinedUnitCost(_)) if !strict => {}
            Err(e) => return Err(e),
        }
        Ok(())
    };

    // A range whose lower end is zero has no finite upper unit cost.
    let keep_range = |outcome, numerator, count: Count, out: &mut Vec<UnitCostRange>| -> Result<()> {
        if count.lo() == 0 && !strict {
            return Ok(());
        }
        out.push(range_of(outcome, numerator, count)?);
        Ok(())
    };

    let exact_funnel = report.funnel_counts().transpose()?;
    if let Some(f) = exact_funnel.as_ref().filter(|f| f.submitted_reports() > 0) {
        let n_c = f.submitted_reports();
        let pi_s = Fraction::new(f.accepted_findings(), n_c)?;
        keep(cost_per_validated_finding(c_g, l.c_v, n_c, pi_s), &mut exact)?;
        keep(cost_per_accepted(c_g, l.c_v, l.c_r, l.c_t, n_c, pi_s), &mut exact)?;
        if let Some(high) = f.high_severity() {
            keep(
                unit_cost(
                    OutcomeKind::HighSeverity,
                    sum(&[c_g, l.c_v])?,
                    count_rational(high),
                ),
                &mut exact,
            )?;
        }
        if let Some(exploitable) = f.exploitable() {
            let r = if f.accepted_findings() == 0 {
                Err(Error::UndefinedUnitCost("no impact-backed findings"))
            } else {
                let pi_e = Fraction::new(exploitable, f.accepted_findings())?;
                cost_per_impact_backed(c_g, l.c_v, l.c_i, n_c, pi_s, pi_e)
            };
            keep(r, &mut exact)?;
        }
    } else {
        let accepted = report.accepted_findings;
        if let Some(a) = accepted {
            match a.exact() {
                Some(n) => keep(
                    unit_cost(
                        OutcomeKind::Accepted,
                        sum(&[c_g, l.c_v, l.c_r, l.c_t])?,
                        count_rational(n),
                    ),
                    &mut exact,
                )?,
                None => keep_range(
                    OutcomeKind::Accepted,
                    sum(&[c_g, l.c_v, l.c_r, l.c_t])?,
                    a,
                    &mut ranges,
                )?,
            }
        } else if let Some(s) = report.submitted_reports {
            // Without acceptance data every report counts as a finding.
            let numerator = sum(&[c_g, l.c_v])?;
            match s.exact() {
                Some(n) => keep(
                    unit_cost(OutcomeKind::ReportedFinding, numerator, count_rational(n)),
                    &mut exact,
                )?,
                None => keep_range(OutcomeKind::ReportedFinding, numerator, s, &mut ranges)?,
            }
        }
        if let Some(impact) = report.impact_status {
            keep(
                unit_cost(
                    OutcomeKind::ImpactBacked,
                    sum(&[c_g, l.c_v, l.c_i])?,
                    count_rational(impact.exploitable),
                ),
                &mut exact,
            )?;
        }
    }
    Ok((exact, ranges))
}

/// Every metric the report's fields support; absent inputs give absent metrics.
pub fn campaign_summary(report: &CampaignReport) -> Result<MetricsSummary> {
    let findings = validate_campaign_report(report);
    if has_fatal(&findings) {
        return Err(Error::FatalFindings(
            findings.into_iter().filter(|f| f.is_fatal()).collect(),
        ));
    }
    let mut summary = match report.funnel_counts().transpose()? {
        Some(c) if c.submitted_reports() > 0 => funnel_metrics(&c)?,
        _ => MetricsSummary::default(),
    };
    summary.campaign_id = Some(report.campaign_id.clone());
    let (exact, ranges) = campaign_unit_costs(report, false)?;
    summary.unit_costs = exact;
    summary.unit_cost_ranges = ranges;
    summary.cost_is_upper_bound = matches!(
        report.total_expenditure,
        Some(Expenditure::Range(MoneyRange {
            reported_as: Some(BoundKind::UpperBound),
            ..
        }))
    );
    summary.fixes_per_maintainer_hour = match (report.patch_status, report.maintainer_review_hours) {
        (Some(p), Some(h)) if !h.is_zero() => Some(fixes_per_maintainer_hour(p.patched, h)?),
        _ => None,
    };
    summary.context = report.context.clone();
    Ok(summary)
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub campaign_id: String,
    pub validation_hours: Option<Hours>,
    pub maintainer_review_hours: Option<Hours>,
    pub summary: MetricsSummary,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
}

/// One row per campaign, ordered by campaign identifier.
pub fn compare_campaigns(reports: &[CampaignReport]) -> Result<Comparison> {
    if reports.is_empty() {
        return Err(Error::NoReports);
    }
    let mut seen = BTreeSet::new();
    for r in reports {
        if !seen.insert(r.campaign_id.as_str()) {
            return Err(Error::DuplicateCampaign(r.campaign_id.clone()));
        }
    }
    let mut rows = reports
        .iter()
        .map(|r| {
            Ok(ComparisonRow {
                campaign_id: r.campaign_id.clone(),
                validation_hours: r.validation_hours,
                maintainer_review_hours: r.maintainer_review_hours,
                summary: campaign_summary(r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.campaign_id.cmp(&b.campaign_id));
    Ok(Comparison { rows })
}
