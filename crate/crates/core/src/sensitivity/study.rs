use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::formula::{lift_cost_model, CostTarget};
use super::monte_carlo::{monte_carlo, McSummary};
use super::{Distribution, UncertainParam};
use crate::error::{Error, Result};
use crate::model::{Fraction, Interval};

pub type ParamSet = BTreeMap<String, UncertainParam>;

/// One uncertainty study: a cost formula plus its parameter ranges.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct SensitivityStudy {
    pub id: String,
    pub target: CostTarget,
    pub params: ParamSet,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct SensitivityDocument {
    pub schema_version: String,
    pub studies: Vec<SensitivityStudy>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct StudyResult {
    pub id: String,
    pub target: CostTarget,
    pub interval: Interval,
    pub monte_carlo: McSummary,
}

/// Lifts the study's formula to an interval and runs seeded Monte Carlo inside it.
pub fn run_study(study: &SensitivityStudy, n_samples: usize, seed: u64) -> Result<StudyResult> {
    let interval = lift_cost_model(study.target, &study.params)?;
    let summary = monte_carlo(study.target, &study.params, n_samples, seed)?;
    Ok(StudyResult {
        id: study.id.clone(),
        target: study.target,
        interval,
        monte_carlo: summary,
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberText {
    Number(f64),
    Text(String),
}

impl NumberText {
    fn value(&self) -> Result<f64> {
        match self {
            NumberText::Number(x) => Ok(*x),
            NumberText::Text(s) if s.contains('/') => s.parse::<Fraction>().map(|f| f.to_f64()),
            NumberText::Text(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::MalformedDecimal(s.clone())),
        }
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum DistributionName {
    Uniform,
    Triangular,
    Point,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ParamRepr {
    Point(NumberText),
    Range {
        lo: NumberText,
        hi: NumberText,
        #[serde(default)]
        distribution: Option<DistributionName>,
        #[serde(default)]
        mode: Option<NumberText>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StudyRepr {
    id: String,
    target: String,
    params: BTreeMap<String, ParamRepr>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct DocumentRepr {
    schema_version: String,
    studies: Vec<StudyRepr>,
}

impl DocumentRepr {
    pub(crate) fn into_document(self) -> Result<SensitivityDocument> {
        let studies = self
            .studies
            .into_iter()
            .map(StudyRepr::into_study)
            .collect::<Result<Vec<_>>>()?;
        Ok(SensitivityDocument {
            schema_version: self.schema_version,
            studies,
        })
    }
}

impl StudyRepr {
    fn into_study(self) -> Result<SensitivityStudy> {
        let target: CostTarget = self.target.parse()?;
        let mut params = ParamSet::new();
        for (name, repr) in self.params {
            let unit = target.unit_of(&name).ok_or_else(|| Error::UnknownParameter {
                param: name.clone(),
                target: target.name(),
            })?;
            let param = match repr {
                ParamRepr::Point(v) => UncertainParam::point(name.clone(), v.value()?, unit)?,
                ParamRepr::Range {
                    lo,
                    hi,
                    distribution,
                    mode,
                } => {
                    let interval = Interval::new(lo.value()?, hi.value()?, unit)?;
                    let distribution = match (distribution, mode) {
                        (Some(DistributionName::Triangular), Some(m)) | (None, Some(m)) => {
                            Distribution::Triangular { mode: m.value()? }
                        }
                        (Some(DistributionName::Triangular), None) => {
                            return Err(Error::InvalidDistribution {
                                param: name,
                                reason: "triangular distribution needs a mode".into(),
                            })
                        }
                        (Some(DistributionName::Point), _) => Distribution::Point,
                        (Some(DistributionName::Uniform), Some(_)) => {
                            return Err(Error::InvalidDistribution {
                                param: name,
                                reason: "uniform distribution takes no mode".into(),
                            })
                        }
                        (Some(DistributionName::Uniform), None) | (None, None) => Distribution::Uniform,
                    };
                    UncertainParam::new(name.clone(), interval, distribution)?
                }
            };
            params.insert(name, param);
        }
        target.check_params(&params)?;
        Ok(SensitivityStudy {
            id: self.id,
            target,
            params,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_points_ranges_and_fractions() {
        let json = r#"{
            "schema_version": "1",
            "studies": [{
                "id": "validation_per_accepted",
                "target": "cost_per_validated_finding",
                "params": {
                    "c_g": 0,
                    "h_v": {"lo": 0.5, "hi": 2},
                    "w_v": {"lo": "100", "hi": 250, "mode": 150},
                    "n_c": 112,
                    "pi_s": "22/112"
                }
            }]
        }"#;
        let doc: DocumentRepr = serde_json::from_str(json).unwrap();
        let doc = doc.into_document().unwrap();
        let s = &doc.studies[0];
        assert_eq!(
            s.params["w_v"].distribution,
            Distribution::Triangular { mode: 150.0 }
        );
        assert_eq!(s.params["pi_s"].interval.lo(), 22.0 / 112.0);
        let r = run_study(s, 1000, 3).unwrap();
        assert!((r.interval.lo() - 254.545).abs() < 0.01);
        assert!(r.monte_carlo.min >= r.interval.lo() && r.monte_carlo.max <= r.interval.hi());
    }

    #[test]
    fn rejects_unknown_targets_and_params() {
        let bad_target = r#"{"schema_version":"1","studies":[{"id":"x","target":"price","params":{}}]}"#;
        let doc: DocumentRepr = serde_json::from_str(bad_target).unwrap();
        assert!(matches!(doc.into_document(), Err(Error::UnknownTarget(_))));
        let bad_param =
            r#"{"schema_version":"1","studies":[{"id":"x","target":"stage_cost","params":{"z":1}}]}"#;
        let doc: DocumentRepr = serde_json::from_str(bad_param).unwrap();
        assert!(matches!(doc.into_document(), Err(Error::UnknownParameter { .. })));
    }
}
