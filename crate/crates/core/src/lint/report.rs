use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Fraction, FunnelCounts, FunnelCountsBuilder, HourlyRate, Hours, Interval, Money, Unit};

pub const SCHEMA_VERSION: &str = "1";

/// A count that is either known exactly or only bounded.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Count {
    Exact(u64),
    Range(CountRange),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "CountRangeRepr")]
pub struct CountRange {
    lo: u64,
    hi: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CountRangeRepr {
    lo: u64,
    hi: u64,
}

impl TryFrom<CountRangeRepr> for CountRange {
    type Error = Error;

    fn try_from(r: CountRangeRepr) -> Result<Self> {
        CountRange::new(r.lo, r.hi)
    }
}

impl CountRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvertedInterval {
                lo: lo as f64,
                hi: hi as f64,
            });
        }
        Ok(Self { lo, hi })
    }
}

impl Count {
    pub fn exact(&self) -> Option<u64> {
        match self {
            Count::Exact(n) => Some(*n),
            Count::Range(r) if r.lo == r.hi => Some(r.lo),
            Count::Range(_) => None,
        }
    }

    pub fn lo(&self) -> u64 {
        match self {
            Count::Exact(n) => *n,
            Count::Range(r) => r.lo,
        }
    }

    pub fn hi(&self) -> u64 {
        match self {
            Count::Exact(n) => *n,
            Count::Range(r) => r.hi,
        }
    }

    pub fn as_interval(&self) -> Interval {
        Interval::new(self.lo() as f64, self.hi() as f64, Unit::Count).expect("ordered by construction")
    }
}

impl std::fmt::Display for Count {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Count::Exact(n) => write!(f, "{n}"),
            Count::Range(r) => write!(f, "{}–{}", r.lo, r.hi),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeveritySplit {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub high: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moderate: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub low: Option<u64>,
    /// The three counts are declared to cover every accepted finding.
    #[serde(default)]
    pub exhaustive: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpactStatus {
    pub exploitable: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assessed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GroundingEvidence {
    pub reproducer: bool,
    pub trace: bool,
    pub path_constraints: bool,
    pub attacker_control: bool,
    pub affected_configs: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PatchStatus {
    pub patched: u64,
    pub tested: u64,
    pub pending: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    UpperBound,
    LowerBound,
    Estimate,
}

/// Total compute/API/tooling spend: exact, or a range such as "under $20,000".
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expenditure {
    Exact(Money),
    Range(MoneyRange),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "MoneyRangeRepr")]
pub struct MoneyRange {
    pub lo: Money,
    pub hi: Money,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reported_as: Option<BoundKind>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MoneyRangeRepr {
    lo: Money,
    hi: Money,
    #[serde(default)]
    reported_as: Option<BoundKind>,
}

impl TryFrom<MoneyRangeRepr> for MoneyRange {
    type Error = Error;

    fn try_from(r: MoneyRangeRepr) -> Result<Self> {
        if r.lo > r.hi {
            return Err(Error::InvertedInterval {
                lo: r.lo.to_usd_f64(),
                hi: r.hi.to_usd_f64(),
            });
        }
        Ok(MoneyRange {
            lo: r.lo,
            hi: r.hi,
            reported_as: r.reported_as,
        })
    }
}

impl Expenditure {
    /// The amount used for unit costs: the exact value, or the upper end of a range.
    pub fn basis(&self) -> Money {
        match self {
            Expenditure::Exact(m) => *m,
            Expenditure::Range(r) => r.hi,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Expenditure::Exact(_))
    }
}

/// Auxiliary anchor values attached to a report (e.g. files scanned).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ContextValue {
    Count(u64),
    Text(String),
}

impl std::fmt::Display for ContextValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ContextValue::Count(n) => write!(f, "{n}"),
            ContextValue::Text(s) => f.write_str(s),
        }
    }
}

/// A structured disclosure for one vulnerability-discovery campaign.
///
/// Every reporting field is optional at parse time; absences are lint warnings
/// and count inconsistencies are fatal lint findings, never parse errors.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CampaignReport {
    pub schema_version: String,
    pub campaign_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_candidates: Option<Count>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deduplicated_candidates: Option<Count>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub submitted_reports: Option<Count>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accepted_findings: Option<Count>,
    /// Precision as stated by the reporter; checked against the counts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_precision: Option<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub severity: Option<SeveritySplit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub impact_status: Option<ImpactStatus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grounding_evidence: Option<GroundingEvidence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation_hours: Option<Hours>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub impact_hours: Option<Hours>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remediation_hours: Option<Hours>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maintainer_review_hours: Option<Hours>,
    /// Fully loaded hourly labor rate used to price reported hours.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labor_rate: Option<HourlyRate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patch_status: Option<PatchStatus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_to_first_useful_finding: Option<Hours>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run_count: Option<Count>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_run_cost: Option<Money>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaffold_effort_hours: Option<Hours>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_expenditure: Option<Expenditure>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub context: BTreeMap<String, ContextValue>,
    /// Fields this schema does not know about, kept for forward compatibility.
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl CampaignReport {
    /// An otherwise empty report.
    pub fn new(campaign_id: impl Into<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            campaign_id: campaign_id.into(),
            description: None,
            raw_candidates: None,
            deduplicated_candidates: None,
            submitted_reports: None,
            accepted_findings: None,
            declared_precision: None,
            severity: None,
            impact_status: None,
            grounding_evidence: None,
            validation_hours: None,
            impact_hours: None,
            remediation_hours: None,
            maintainer_review_hours: None,
            labor_rate: None,
            patch_status: None,
            time_to_first_useful_finding: None,
            run_count: None,
            failed_run_cost: None,
            scaffold_effort_hours: None,
            total_expenditure: None,
            context: BTreeMap::new(),
            extra: BTreeMap::new(),
        }
    }

    /// The exact funnel, when submitted and accepted counts are both known exactly.
    pub fn funnel_counts(&self) -> Option<Result<FunnelCounts>> {
        let submitted = self.submitted_reports?.exact()?;
        let accepted = self.accepted_findings?.exact()?;
        let severity = self.severity.unwrap_or_default();
        let builder = FunnelCountsBuilder {
            raw_candidates: self.raw_candidates.and_then(|c| c.exact()),
            deduplicated_candidates: self.deduplicated_candidates.and_then(|c| c.exact()),
            submitted_reports: submitted,
            accepted_findings: accepted,
            high_severity: severity.high,
            moderate_severity: severity.moderate,
            low_severity: severity.low,
            severity_exhaustive: severity.exhaustive,
            exploitable: self.impact_status.map(|i| i.exploitable),
        };
        Some(builder.build())
    }

    pub fn context_value(&self, key: &str) -> Option<&ContextValue> {
        self.context.get(key)
    }
}
