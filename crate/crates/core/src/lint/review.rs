use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OwnershipModel {
    HumanOwned,
    HumanDrivenLlm,
    LlmOwned,
}

impl OwnershipModel {
    pub const ALL: [OwnershipModel; 3] = [
        OwnershipModel::HumanOwned,
        OwnershipModel::HumanDrivenLlm,
        OwnershipModel::LlmOwned,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OwnershipModel::HumanOwned => "human_owned",
            OwnershipModel::HumanDrivenLlm => "human_driven_llm",
            OwnershipModel::LlmOwned => "llm_owned",
        }
    }
}

impl FromStr for OwnershipModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownOwnershipModel(s.to_string()))
    }
}

impl fmt::Display for OwnershipModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Artifact {
    Patch,
    CandidateReport,
    AffectedPaths,
    ExploitabilityArgument,
    ChangedInvariant,
    RegressionTest,
    CompatibilityNotes,
    Documentation,
    HumanIntent,
    PromptSpec,
    ReviewDecision,
    AuditTrail,
    ObjectiveSpec,
    EvidenceUsed,
    AlternativesRejected,
    AcceptabilityExplanation,
}

impl Artifact {
    pub const ALL: [Artifact; 16] = [
        Artifact::Patch,
        Artifact::CandidateReport,
        Artifact::AffectedPaths,
        Artifact::ExploitabilityArgument,
        Artifact::ChangedInvariant,
        Artifact::RegressionTest,
        Artifact::CompatibilityNotes,
        Artifact::Documentation,
        Artifact::HumanIntent,
        Artifact::PromptSpec,
        Artifact::ReviewDecision,
        Artifact::AuditTrail,
        Artifact::ObjectiveSpec,
        Artifact::EvidenceUsed,
        Artifact::AlternativesRejected,
        Artifact::AcceptabilityExplanation,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Artifact::Patch => "patch",
            Artifact::CandidateReport => "candidate_report",
            Artifact::AffectedPaths => "affected_paths",
            Artifact::ExploitabilityArgument => "exploitability_argument",
            Artifact::ChangedInvariant => "changed_invariant",
            Artifact::RegressionTest => "regression_test",
            Artifact::CompatibilityNotes => "compatibility_notes",
            Artifact::Documentation => "documentation",
            Artifact::HumanIntent => "human_intent",
            Artifact::PromptSpec => "prompt_spec",
            Artifact::ReviewDecision => "review_decision",
            Artifact::AuditTrail => "audit_trail",
            Artifact::ObjectiveSpec => "objective_spec",
            Artifact::EvidenceUsed => "evidence_used",
            Artifact::AlternativesRejected => "alternatives_rejected",
            Artifact::AcceptabilityExplanation => "acceptability_explanation",
        }
    }

    /// Checklist wording shown to reviewers.
    pub fn label(self) -> &'static str {
        match self {
            Artifact::Patch => "patch",
            Artifact::CandidateReport => "candidate report",
            Artifact::AffectedPaths => "affected code paths",
            Artifact::ExploitabilityArgument => "exploitability argument",
            Artifact::ChangedInvariant => "changed invariant",
            Artifact::RegressionTest => "tests",
            Artifact::CompatibilityNotes => "compatibility notes",
            Artifact::Documentation => "documentation",
            Artifact::HumanIntent => "human intent",
            Artifact::PromptSpec => "prompt specification",
            Artifact::ReviewDecision => "review decision",
            Artifact::AuditTrail => "audit trail",
            Artifact::ObjectiveSpec => "objective specification",
            Artifact::EvidenceUsed => "evidence used",
            Artifact::AlternativesRejected => "alternatives rejected",
            Artifact::AcceptabilityExplanation => "acceptability explanation",
        }
    }
}

impl FromStr for Artifact {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.key() == s)
            .ok_or_else(|| Error::Document {
                origin: "review package".into(),
                message: format!("unknown artifact {s:?}"),
            })
    }
}

/// A flag is either a bare boolean or `{"present": bool, "evidence": "..."}`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct ArtifactFlag {
    pub present: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<String>,
}

impl ArtifactFlag {
    pub fn present() -> Self {
        Self {
            present: true,
            evidence: None,
        }
    }
}

impl<'de> Deserialize<'de> for ArtifactFlag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Full {
            present: bool,
            #[serde(default)]
            evidence: Option<String>,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Bool(bool),
            Full(Full),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Bool(present) => ArtifactFlag {
                present,
                evidence: None,
            },
            Repr::Full(f) => ArtifactFlag {
                present: f.present,
                evidence: f.evidence,
            },
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReviewPackage {
    pub ownership_model: OwnershipModel,
    #[serde(default)]
    pub artifacts: BTreeMap<Artifact, ArtifactFlag>,
}

impl ReviewPackage {
    pub fn new(ownership_model: OwnershipModel) -> Self {
        Self {
            ownership_model,
            artifacts: BTreeMap::new(),
        }
    }

    pub fn with(mut self, artifact: Artifact) -> Self {
        self.artifacts.insert(artifact, ArtifactFlag::present());
        self
    }

    pub fn has(&self, artifact: Artifact) -> bool {
        self.artifacts.get(&artifact).is_some_and(|f| f.present)
    }
}

/// Required artifact sets per ownership model.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ReviewPolicy {
    required: BTreeMap<OwnershipModel, BTreeSet<Artifact>>,
}

impl Default for ReviewPolicy {
    fn default() -> Self {
        use Artifact::*;
        let human_owned = [
            Patch,
            ChangedInvariant,
            RegressionTest,
            CompatibilityNotes,
            Documentation,
            CandidateReport,
        ];
        let mut human_driven: BTreeSet<Artifact> = human_owned.into_iter().collect();
        human_driven.extend([HumanIntent, PromptSpec, ReviewDecision]);
        let llm_owned = [
            AuditTrail,
            ObjectiveSpec,
            EvidenceUsed,
            AlternativesRejected,
            RegressionTest,
            AcceptabilityExplanation,
        ];
        let required = BTreeMap::from([
            (OwnershipModel::HumanOwned, human_owned.into_iter().collect()),
            (OwnershipModel::HumanDrivenLlm, human_driven),
            (OwnershipModel::LlmOwned, llm_owned.into_iter().collect()),
        ]);
        Self { required }
    }
}

impl ReviewPolicy {
    pub fn required(&self, model: OwnershipModel) -> &BTreeSet<Artifact> {
        &self.required[&model]
    }

    /// Replaces the required set for one model.
    pub fn set_required(&mut self, model: OwnershipModel, artifacts: impl IntoIterator<Item = Artifact>) {
        self.required.insert(model, artifacts.into_iter().collect());
    }

    /// Parses a policy document; models it omits keep their default sets.
    ///
    /// ```json
    /// {"required": {"llm_owned": ["audit_trail", "regression_test"]}}
    /// ```
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            required: BTreeMap<String, Vec<String>>,
        }
        let repr: Repr = serde_json::from_str(text).map_err(|e| Error::Parse {
            origin: "policy".into(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut policy = Self::default();
        for (model, artifacts) in repr.required {
            let model: OwnershipModel = model.parse()?;
            let artifacts = artifacts
                .iter()
                .map(|a| a.parse::<Artifact>())
                .collect::<Result<Vec<_>>>()?;
            policy.set_required(model, artifacts);
        }
        Ok(policy)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChecklistItem {
    pub artifact: Artifact,
    pub label: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChecklistResult {
    pub ownership_model: OwnershipModel,
    pub items: Vec<ChecklistItem>,
    pub passed: bool,
}

impl ChecklistResult {
    pub fn failed_labels(&self) -> Vec<&str> {
        self.items
            .iter()
            .filter(|i| !i.passed)
            .map(|i| i.label.as_str())
            .collect()
    }
}

/// Evaluates a package against the required set for its ownership model.
pub fn check_review_package(pkg: &ReviewPackage, policy: &ReviewPolicy) -> ChecklistResult {
    let items: Vec<ChecklistItem> = policy
        .required(pkg.ownership_model)
        .iter()
        .map(|&artifact| ChecklistItem {
            artifact,
            label: artifact.label().to_string(),
            passed: pkg.has(artifact),
            evidence: pkg.artifacts.get(&artifact).and_then(|f| f.evidence.clone()),
        })
        .collect();
    let passed = items.iter().all(|i| i.passed);
    ChecklistResult {
        ownership_model: pkg.ownership_model,
        items,
        passed,
    }
}

/// Parses a review package document. Unknown ownership models are errors.
pub fn parse_review_package(text: &str, origin: &str) -> Result<ReviewPackage> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if let Some(model) = value.get("ownership_model").and_then(|m| m.as_str()) {
        model.parse::<OwnershipModel>()?;
    }
    serde_json::from_value(value).map_err(|e| Error::Document {
        origin: origin.to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn human_owned_missing_tests() {
        let pkg = ReviewPackage::new(OwnershipModel::HumanOwned)
            .with(Artifact::Patch)
            .with(Artifact::ChangedInvariant)
            .with(Artifact::CompatibilityNotes)
            .with(Artifact::Documentation)
            .with(Artifact::CandidateReport);
        let r = check_review_package(&pkg, &ReviewPolicy::default());
        assert!(!r.passed);
        assert_eq!(r.failed_labels(), vec!["tests"]);
    }

    #[test]
    fn llm_owned_complete() {
        use Artifact::*;
        let pkg = [
            AuditTrail,
            ObjectiveSpec,
            EvidenceUsed,
            AlternativesRejected,
            RegressionTest,
            AcceptabilityExplanation,
        ]
        .into_iter()
        .fold(ReviewPackage::new(OwnershipModel::LlmOwned), ReviewPackage::with);
        assert!(check_review_package(&pkg, &ReviewPolicy::default()).passed);
    }

    #[test]
    fn empty_package_fails_everything() {
        let policy = ReviewPolicy::default();
        for model in OwnershipModel::ALL {
            let r = check_review_package(&ReviewPackage::new(model), &policy);
            assert!(!r.passed);
            assert_eq!(r.items.len(), policy.required(model).len());
            assert!(r.items.iter().all(|i| !i.passed));
        }
        assert_eq!(policy.required(OwnershipModel::HumanDrivenLlm).len(), 9);
    }

    #[test]
    fn flag_forms_and_unknown_model() {
        let pkg = parse_review_package(
            r#"{"ownership_model":"llm_owned","artifacts":{"audit_trail":{"present":true,"evidence":"log.txt"},"patch":false}}"#,
            "t",
        )
        .unwrap();
        assert!(pkg.has(Artifact::AuditTrail));
        assert!(!pkg.has(Artifact::Patch));
        let err = parse_review_package(r#"{"ownership_model":"robot","artifacts":{}}"#, "t").unwrap_err();
        assert!(matches!(err, Error::UnknownOwnershipModel(_)));
    }

    #[test]
    fn policy_override() {
        let p = ReviewPolicy::from_json(r#"{"required":{"llm_owned":["audit_trail"]}}"#).unwrap();
        assert_eq!(p.required(OwnershipModel::LlmOwned).len(), 1);
        assert_eq!(p.required(OwnershipModel::HumanOwned).len(), 6);
        assert!(ReviewPolicy::from_json(r#"{"required":{"cyborg":[]}}"#).is_err());
    }
}
