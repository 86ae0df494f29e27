use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{Fraction, HourlyRate, Hours, Money, Stage, StageEffort};
use crate::sensitivity::Distribution;

pub const HOURS_PER_WEEK: f64 = 168.0;

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Arrivals {
    /// Evenly spaced candidates, `per_week` of them each week.
    Deterministic { per_week: f64 },
    /// Exponential inter-arrival gaps with mean `168 / per_week` hours.
    Poisson { per_week: f64 },
}

impl Arrivals {
    pub fn per_week(&self) -> f64 {
        match *self {
            Arrivals::Deterministic { per_week } | Arrivals::Poisson { per_week } => per_week,
        }
    }
}

/// Per-item service requirement: a fixed duration or a sampled range.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ServiceTime {
    Fixed(Hours),
    Range {
        lo: Hours,
        hi: Hours,
        #[serde(default)]
        distribution: Distribution,
    },
}

impl Default for ServiceTime {
    fn default() -> Self {
        ServiceTime::Fixed(Hours::ZERO)
    }
}

impl ServiceTime {
    pub fn fixed(&self) -> Option<Hours> {
        match *self {
            ServiceTime::Fixed(h) => Some(h),
            ServiceTime::Range { lo, hi, .. } if lo == hi => Some(lo),
            ServiceTime::Range { .. } => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageConfig {
    #[serde(default)]
    pub service_hours: ServiceTime,
    /// Hours of work available per week; absent means unbounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weekly_capacity_hours: Option<Hours>,
    #[serde(default)]
    pub hourly_rate: HourlyRate,
}

impl StageConfig {
    pub fn new(service_hours: Hours, weekly_capacity_hours: Option<Hours>) -> Self {
        Self {
            service_hours: ServiceTime::Fixed(service_hours),
            weekly_capacity_hours,
            hourly_rate: HourlyRate::default(),
        }
    }

    /// The matching cost-engine effort, when service time is fixed.
    pub fn effort(&self, stage: Stage) -> Option<StageEffort> {
        self.service_hours.fixed().map(|h| StageEffort {
            stage,
            hours_per_item: h,
            rate: self.hourly_rate,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageConfigs {
    #[serde(default)]
    pub validation: StageConfig,
    #[serde(default)]
    pub impact: StageConfig,
    #[serde(default)]
    pub remediation: StageConfig,
    #[serde(default)]
    pub triage: StageConfig,
}

impl StageConfigs {
    pub fn get(&self, stage: Stage) -> &StageConfig {
        match stage {
            Stage::Validation => &self.validation,
            Stage::Impact => &self.impact,
            Stage::Remediation => &self.remediation,
            Stage::Triage => &self.triage,
        }
    }

    pub fn get_mut(&mut self, stage: Stage) -> &mut StageConfig {
        match stage {
            Stage::Validation => &mut self.validation,
            Stage::Impact => &mut self.impact,
            Stage::Remediation => &mut self.remediation,
            Stage::Triage => &mut self.triage,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Acceptance {
    /// Applied at validation exit.
    #[serde(default = "Fraction::one")]
    pub pi_s: Fraction,
    /// Applied at impact exit.
    #[serde(default = "Fraction::one")]
    pub pi_e: Fraction,
}

impl Default for Acceptance {
    fn default() -> Self {
        Self {
            pi_s: Fraction::one(),
            pi_e: Fraction::one(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Thinning {
    /// Each exit passes independently with probability π.
    #[default]
    Bernoulli,
    /// The k-th exit passes iff `floor((k+1)π) > floor(kπ)`.
    Deterministic,
}

/// Severity mix drawn at generation time, as probabilities.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeverityMix {
    pub high: Fraction,
    pub moderate: Fraction,
    pub low: Fraction,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum QueueDiscipline {
    #[default]
    Fifo,
    /// Non-preemptive: high before moderate before low, FIFO within a class.
    SeverityPriority(SeverityMix),
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub horizon_weeks: u32,
    pub arrivals: Arrivals,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub stages: StageConfigs,
    #[serde(default)]
    pub acceptance: Acceptance,
    #[serde(default)]
    pub thinning: Thinning,
    #[serde(default)]
    pub queue_discipline: QueueDiscipline,
    /// Generation cost charged per arriving candidate.
    #[serde(default)]
    pub generation_cost_per_candidate: Money,
}

impl PipelineConfig {
    pub fn new(horizon_weeks: u32, arrivals: Arrivals) -> Self {
        Self {
            horizon_weeks,
            arrivals,
            seed: 0,
            stages: StageConfigs::default(),
            acceptance: Acceptance::default(),
            thinning: Thinning::default(),
            queue_discipline: QueueDiscipline::default(),
            generation_cost_per_candidate: Money::ZERO,
        }
    }

    pub fn horizon_hours(&self) -> f64 {
        f64::from(self.horizon_weeks) * HOURS_PER_WEEK
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon_weeks == 0 {
            return Err(Error::ZeroHorizon);
        }
        let rate = self.arrivals.per_week();
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "arrival rate must be finite and non-negative, got {rate}"
            )));
        }
        for (name, pi) in [("pi_s", self.acceptance.pi_s), ("pi_e", self.acceptance.pi_e)] {
            if !pi.is_proportion() {
                return Err(Error::InvalidConfig(format!("{name} = {pi} is not in [0, 1]")));
            }
        }
        for stage in Stage::ALL {
            if let ServiceTime::Range { lo, hi, distribution } = self.stages.get(stage).service_hours {
                if lo > hi {
                    return Err(Error::InvalidConfig(format!(
                        "{} service range {lo}..{hi} is inverted",
                        stage.name()
                    )));
                }
                if let Distribution::Triangular { mode } = distribution {
                    if !(lo.to_f64()..=hi.to_f64()).contains(&mode) {
                        return Err(Error::InvalidConfig(format!(
                            "{} service mode {mode} outside {lo}..{hi}",
                            stage.name()
                        )));
                    }
                }
            }
        }
        if let QueueDiscipline::SeverityPriority(mix) = self.queue_discipline {
            let total = mix
                .high
                .as_rational()
                .checked_add(&mix.moderate.as_rational())?
                .checked_add(&mix.low.as_rational())?;
            if total != crate::model::Rational::one() {
                return Err(Error::InvalidConfig(format!(
                    "severity probabilities sum to {total}, expected 1"
                )));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding, used to pair results with configs.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}
