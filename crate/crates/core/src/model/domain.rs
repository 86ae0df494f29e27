use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use super::fraction::Fraction;
use super::money::{HourlyRate, Hours, Money};
use crate::error::{Error, Result};

/// Labor stages of the remediation pipeline, in pipeline order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Validation,
    Impact,
    Remediation,
    Triage,
}

impl Stage {
    pub const ALL: [Stage; 4] = [
        Stage::Validation,
        Stage::Impact,
        Stage::Remediation,
        Stage::Triage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Validation => "validation",
            Stage::Impact => "impact",
            Stage::Remediation => "remediation",
            Stage::Triage => "triage",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-item effort at one stage: hours per item at a loaded hourly rate.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StageEffort {
    pub stage: Stage,
    pub hours_per_item: Hours,
    pub rate: HourlyRate,
}

/// Token prices in USD per million tokens.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TokenPricing {
    pub model_name: String,
    pub input_per_million: Money,
    pub output_per_million: Money,
}

impl TokenPricing {
    pub fn new(model_name: impl Into<String>, input_per_million: Money, output_per_million: Money) -> Self {
        Self {
            model_name: model_name.into(),
            input_per_million,
            output_per_million,
        }
    }

    /// Published list prices for the Claude 4.x tiers.
    pub fn opus_4_6() -> Self {
        Self::new("claude-opus-4.6", Money::from_usd(5), Money::from_usd(25))
    }

    pub fn sonnet_4_6() -> Self {
        Self::new("claude-sonnet-4.6", Money::from_usd(3), Money::from_usd(15))
    }

    pub fn haiku_4_5() -> Self {
        Self::new("claude-haiku-4.5", Money::from_usd(1), Money::from_usd(5))
    }
}

/// Shape of a candidate-generation campaign.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GenerationProfile {
    pub runs: u64,
    pub input_tokens_per_run: u64,
    pub output_tokens_per_run: u64,
    pub tools_cost: Money,
}

/// Component costs of a campaign: generation, validation, impact, remediation, triage.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub c_g: Money,
    pub c_v: Money,
    pub c_i: Money,
    pub c_r: Money,
    pub c_t: Money,
}

impl CostBreakdown {
    pub fn component(&self, stage: Stage) -> Money {
        match stage {
            Stage::Validation => self.c_v,
            Stage::Impact => self.c_i,
            Stage::Remediation => self.c_r,
            Stage::Triage => self.c_t,
        }
    }

    pub fn set_component(&mut self, stage: Stage, value: Money) {
        match stage {
            Stage::Validation => self.c_v = value,
            Stage::Impact => self.c_i = value,
            Stage::Remediation => self.c_r = value,
            Stage::Triage => self.c_t = value,
        }
    }
}

/// Descriptive inputs to an outcome's market price. Never evaluated numerically.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct PriceFactors {
    pub utility: String,
    pub scarcity: String,
    pub exclusivity: String,
    pub legal_risk: String,
    pub substitutes: String,
}

/// Severity labels for accepted findings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    High,
    Moderate,
    Low,
}

/// Exact campaign funnel: raw ≥ deduplicated ≥ submitted ≥ accepted.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct FunnelCounts {
    raw_candidates: Option<u64>,
    deduplicated_candidates: Option<u64>,
    submitted_reports: u64,
    accepted_findings: u64,
    high_severity: Option<u64>,
    moderate_severity: Option<u64>,
    low_severity: Option<u64>,
    severity_exhaustive: bool,
    exploitable: Option<u64>,
}

#[derive(Clone, Copy, Default, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunnelCountsBuilder {
    pub raw_candidates: Option<u64>,
    pub deduplicated_candidates: Option<u64>,
    pub submitted_reports: u64,
    pub accepted_findings: u64,
    pub high_severity: Option<u64>,
    pub moderate_severity: Option<u64>,
    pub low_severity: Option<u64>,
    #[serde(default)]
    pub severity_exhaustive: bool,
    pub exploitable: Option<u64>,
}

impl FunnelCountsBuilder {
    pub fn new(submitted_reports: u64, accepted_findings: u64) -> Self {
        Self {
            submitted_reports,
            accepted_findings,
            ..Self::default()
        }
    }

    pub fn high(mut self, high: u64) -> Self {
        self.high_severity = Some(high);
        self
    }

    pub fn build(self) -> Result<FunnelCounts> {
        let chain = [
            ("raw_candidates", self.raw_candidates),
            ("deduplicated_candidates", self.deduplicated_candidates),
            ("submitted_reports", Some(self.submitted_reports)),
            ("accepted_findings", Some(self.accepted_findings)),
        ];
        for (i, (upper_name, upper)) in chain.iter().enumerate() {
            for (lower_name, lower) in &chain[i + 1..] {
                if let (Some(u), Some(l)) = (upper, lower) {
                    if l > u {
                        return Err(Error::FunnelViolation(format!(
                            "{lower_name} ({l}) exceeds {upper_name} ({u})"
                        )));
                    }
                }
            }
        }
        let accepted = self.accepted_findings;
        let severities = [
            ("high_severity", self.high_severity),
            ("moderate_severity", self.moderate_severity),
            ("low_severity", self.low_severity),
        ];
        for (name, value) in severities {
            if let Some(v) = value {
                if v > accepted {
                    return Err(Error::FunnelViolation(format!(
                        "{name} ({v}) exceeds accepted_findings ({accepted})"
                    )));
                }
            }
        }
        match (self.high_severity, self.moderate_severity, self.low_severity) {
            (Some(h), Some(m), Some(l)) => {
                let sum = h + m + l;
                if sum > accepted || (self.severity_exhaustive && sum != accepted) {
                    return Err(Error::FunnelViolation(format!(
                        "severity split {h}+{m}+{l}={sum} inconsistent with accepted_findings ({accepted})"
                    )));
                }
            }
            _ if self.severity_exhaustive => {
                return Err(Error::FunnelViolation(
                    "exhaustive severity split requires high, moderate and low counts".into(),
                ));
            }
            _ => {}
        }
        if let Some(e) = self.exploitable {
            if e > accepted {
                return Err(Error::FunnelViolation(format!(
                    "exploitable ({e}) exceeds accepted_findings ({accepted})"
                )));
            }
        }
        Ok(FunnelCounts {
            raw_candidates: self.raw_candidates,
            deduplicated_candidates: self.deduplicated_candidates,
            submitted_reports: self.submitted_reports,
            accepted_findings: self.accepted_findings,
            high_severity: self.high_severity,
            moderate_severity: self.moderate_severity,
            low_severity: self.low_severity,
            severity_exhaustive: self.severity_exhaustive,
            exploitable: self.exploitable,
        })
    }
}

impl FunnelCounts {
    pub fn raw_candidates(&self) -> Option<u64> {
        self.raw_candidates
    }

    pub fn deduplicated_candidates(&self) -> Option<u64> {
        self.deduplicated_candidates
    }

    pub fn submitted_reports(&self) -> u64 {
        self.submitted_reports
    }

    pub fn accepted_findings(&self) -> u64 {
        self.accepted_findings
    }

    pub fn high_severity(&self) -> Option<u64> {
        self.high_severity
    }

    pub fn moderate_severity(&self) -> Option<u64> {
        self.moderate_severity
    }

    pub fn low_severity(&self) -> Option<u64> {
        self.low_severity
    }

    pub fn severity_exhaustive(&self) -> bool {
        self.severity_exhaustive
    }

    pub fn exploitable(&self) -> Option<u64> {
        self.exploitable
    }

    /// Accepted fraction among submitted reports. `None` when nothing was submitted.
    pub fn precision(&self) -> Option<Fraction> {
        Fraction::proportion(self.accepted_findings, self.submitted_reports).ok()
    }
}

impl<'de> Deserialize<'de> for FunnelCounts {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        FunnelCountsBuilder::deserialize(deserializer)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn funnel_monotonicity_enforced() {
        assert!(FunnelCountsBuilder::new(112, 22).high(14).build().is_ok());
        let err = FunnelCountsBuilder::new(20, 30).build().unwrap_err();
        assert!(matches!(err, Error::FunnelViolation(_)));
        let mut b = FunnelCountsBuilder::new(10, 5);
        b.raw_candidates = Some(9);
        assert!(b.build().is_err());
    }

    #[test]
    fn severity_split_checks() {
        let mut b = FunnelCountsBuilder::new(300, 271);
        b.high_severity = Some(180);
        b.moderate_severity = Some(80);
        b.low_severity = Some(11);
        b.severity_exhaustive = true;
        assert!(b.build().is_ok());
        b.low_severity = Some(10);
        assert!(b.build().is_err());
        b.severity_exhaustive = false;
        assert!(b.build().is_ok());
        b.low_severity = Some(12);
        assert!(b.build().is_err());
    }

    #[test]
    fn deserialization_rechecks_invariants() {
        let ok = r#"{"submitted_reports":112,"accepted_findings":22,"high_severity":14}"#;
        assert!(serde_json::from_str::<FunnelCounts>(ok).is_ok());
        let bad = r#"{"submitted_reports":20,"accepted_findings":30}"#;
        assert!(serde_json::from_str::<FunnelCounts>(bad).is_err());
    }
}
