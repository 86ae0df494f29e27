use serde::{Deserialize, Serialize};

use super::report::{CampaignReport, Count, SCHEMA_VERSION};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingSeverity {
    Fatal,
    Warning,
}

impl FindingSeverity {
    pub fn name(self) -> &'static str {
        match self {
            FindingSeverity::Fatal => "fatal",
            FindingSeverity::Warning => "warning",
        }
    }
}

/// A single lint result. Fatal findings block metric computation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct LintFinding {
    pub severity: FindingSeverity,
    pub field: String,
    pub message: String,
    /// Minimum reporting row this finding relates to.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reporting_row: Option<String>,
}

impl LintFinding {
    fn fatal(field: &str, message: String, row: Option<&str>) -> Self {
        Self {
            severity: FindingSeverity::Fatal,
            field: field.to_string(),
            message,
            reporting_row: row.map(str::to_string),
        }
    }

    fn warning(field: &str, message: String, row: Option<&str>) -> Self {
        Self {
            severity: FindingSeverity::Warning,
            field: field.to_string(),
            message,
            reporting_row: row.map(str::to_string),
        }
    }

    pub fn is_fatal(&self) -> bool {
        self.severity == FindingSeverity::Fatal
    }
}

/// Minimum reporting fields: (report field, reporting row).
///
/// Precision is derived from the counts and never required as an input.
pub const REPORTING_FIELDS: [(&str, &str); 16] = [
    ("raw_candidates", "Raw candidate count"),
    ("deduplicated_candidates", "Deduplicated candidate count"),
    ("submitted_reports", "Submitted report count"),
    ("accepted_findings", "Accepted finding count"),
    ("severity", "Severity distribution"),
    ("impact_status", "Impact/exploitability status"),
    ("grounding_evidence", "Grounding evidence"),
    ("validation_hours", "Validation hours"),
    ("impact_hours", "Impact-assessment hours"),
    ("maintainer_review_hours", "Maintainer review hours"),
    ("patch_status", "Patch and test status"),
    ("time_to_first_useful_finding", "Time-to-first-useful-finding"),
    ("run_count", "Run count and failed-run cost"),
    ("failed_run_cost", "Run count and failed-run cost"),
    ("scaffold_effort_hours", "Scaffold engineering effort"),
    ("total_expenditure", "Compute/API/tooling cost"),
];

const PRECISION_ROW: &str = "Precision / reviewer burden";

fn row_of(field: &str) -> Option<&'static str> {
    REPORTING_FIELDS
        .iter()
        .find(|(f, _)| *f == field)
        .map(|(_, row)| *row)
}

fn is_present(report: &CampaignReport, field: &str) -> bool {
    match field {
        "raw_candidates" => report.raw_candidates.is_some(),
        "deduplicated_candidates" => report.deduplicated_candidates.is_some(),
        "submitted_reports" => report.submitted_reports.is_some(),
        "accepted_findings" => report.accepted_findings.is_some(),
        "severity" => report.severity.is_some(),
        "impact_status" => report.impact_status.is_some(),
        "grounding_evidence" => report.grounding_evidence.is_some(),
        "validation_hours" => report.validation_hours.is_some(),
        "impact_hours" => report.impact_hours.is_some(),
        "maintainer_review_hours" => report.maintainer_review_hours.is_some(),
        "patch_status" => report.patch_status.is_some(),
        "time_to_first_useful_finding" => report.time_to_first_useful_finding.is_some(),
        "run_count" => report.run_count.is_some(),
        "failed_run_cost" => report.failed_run_cost.is_some(),
        "scaffold_effort_hours" => report.scaffold_effort_hours.is_some(),
        "total_expenditure" => report.total_expenditure.is_some(),
        _ => unreachable!("unknown reporting field {field}"),
    }
}

/// Checks a report against the minimum reporting fields and count invariants.
///
/// Missing fields and unknown extra fields are warnings; any count that is
/// provably inconsistent is fatal. Output is sorted by (severity, field).
pub fn validate_campaign_report(report: &CampaignReport) -> Vec<LintFinding> {
    let mut findings = Vec::new();

    if report.schema_version != SCHEMA_VERSION {
        findings.push(LintFinding::fatal(
            "schema_version",
            format!("unsupported schema_version {:?}", report.schema_version),
            None,
        ));
    }
    if report.campaign_id.trim().is_empty() {
        findings.push(LintFinding::fatal(
            "campaign_id",
            "campaign_id must not be empty".into(),
            None,
        ));
    }

    for (field, row) in REPORTING_FIELDS {
        if !is_present(report, field) {
            findings.push(LintFinding::warning(
                field,
                "field not reported".into(),
                Some(row),
            ));
        }
    }

    check_funnel(report, &mut findings);
    check_severity(report, &mut findings);
    check_impact(report, &mut findings);
    check_patches(report, &mut findings);
    check_precision(report, &mut findings);

    for key in report.extra.keys() {
        findings.push(LintFinding::warning(
            key,
            "unknown field; kept but not interpreted".into(),
            None,
        ));
    }

    findings.sort();
    findings.dedup();
    findings
}

pub fn has_fatal(findings: &[LintFinding]) -> bool {
    findings.iter().any(LintFinding::is_fatal)
}

/// `smaller` provably exceeds `larger` when its lower bound is above the other's upper bound.
fn provably_exceeds(smaller: &Count, larger: &Count) -> bool {
    smaller.lo() > larger.hi()
}

fn check_funnel(report: &CampaignReport, findings: &mut Vec<LintFinding>) {
    let chain = [
        ("raw_candidates", report.raw_candidates),
        ("deduplicated_candidates", report.deduplicated_candidates),
        ("submitted_reports", report.submitted_reports),
        ("accepted_findings", report.accepted_findings),
    ];
    for (i, (upper_name, upper)) in chain.iter().enumerate() {
        for (lower_name, lower) in &chain[i + 1..] {
            if let (Some(u), Some(l)) = (upper, lower) {
                if provably_exceeds(l, u) {
                    findings.push(LintFinding::fatal(
                        lower_name,
                        format!("funnel inversion: {lower_name} ({l}) exceeds {upper_name} ({u})"),
                        row_of(lower_name),
                    ));
                }
            }
        }
    }
}

fn check_severity(report: &CampaignReport, findings: &mut Vec<LintFinding>) {
    let Some(split) = report.severity else { return };
    let row = row_of("severity");
    if let Some(accepted) = report.accepted_findings {
        for (label, value) in [
            ("high", split.high),
            ("moderate", split.moderate),
            ("low", split.low),
        ] {
            if let Some(v) = value {
                if v > accepted.hi() {
                    findings.push(LintFinding::fatal(
                        "severity",
                        format!("{label} count {v} exceeds accepted_findings ({accepted})"),
                        row,
                    ));
                }
            }
        }
    }
    match (split.high, split.moderate, split.low) {
        (Some(h), Some(m), Some(l)) => {
            let sum = h + m + l;
            if let Some(accepted) = report.accepted_findings {
                if sum > accepted.hi() {
                    findings.push(LintFinding::fatal(
                        "severity",
                        format!("severity split {h}+{m}+{l}={sum} exceeds accepted_findings ({accepted})"),
                        row,
                    ));
                } else if split.exhaustive && (sum < accepted.lo() || sum > accepted.hi()) {
                    findings.push(LintFinding::fatal(
                        "severity",
                        format!("exhaustive severity split {h}+{m}+{l}={sum} does not equal accepted_findings ({accepted})"),
                        row,
                    ));
                }
            }
        }
        _ if split.exhaustive => findings.push(LintFinding::fatal(
            "severity",
            "exhaustive severity split must give high, moderate and low counts".into(),
            row,
        )),
        _ => {}
    }
}

fn check_impact(report: &CampaignReport, findings: &mut Vec<LintFinding>) {
    let Some(impact) = report.impact_status else {
        return;
    };
    let row = row_of("impact_status");
    if let Some(accepted) = report.accepted_findings {
        if impact.exploitable > accepted.hi() {
            findings.push(LintFinding::fatal(
                "impact_status",
                format!(
                    "exploitable count {} exceeds accepted_findings ({accepted})",
                    impact.exploitable
                ),
                row,
            ));
        }
    }
    if let Some(assessed) = impact.assessed {
        if impact.exploitable > assessed {
            findings.push(LintFinding::fatal(
                "impact_status",
                format!(
                    "exploitable count {} exceeds assessed count {assessed}",
                    impact.exploitable
                ),
                row,
            ));
        }
    }
}

fn check_patches(report: &CampaignReport, findings: &mut Vec<LintFinding>) {
    let (Some(patches), Some(accepted)) = (report.patch_status, report.accepted_findings) else {
        return;
    };
    for (label, v) in [
        ("patched", patches.patched),
        ("tested", patches.tested),
        ("pending", patches.pending),
    ] {
        if v > accepted.hi() {
            findings.push(LintFinding::fatal(
                "patch_status",
                format!("{label} count {v} exceeds accepted_findings ({accepted})"),
                row_of("patch_status"),
            ));
        }
    }
}

fn check_precision(report: &CampaignReport, findings: &mut Vec<LintFinding>) {
    let Some(declared) = report.declared_precision else {
        return;
    };
    let counts = report
        .submitted_reports
        .and_then(|s| s.exact())
        .zip(report.accepted_findings.and_then(|a| a.exact()));
    match counts {
        Some((submitted, accepted)) if submitted > 0 => {
            let derived = crate::model::Fraction::new(accepted, submitted).expect("positive denominator");
            if derived != declared {
                findings.push(LintFinding::warning(
                    "declared_precision",
                    format!("declared precision {declared} does not match accepted/submitted = {derived}"),
                    Some(PRECISION_ROW),
                ));
            }
        }
        _ => findings.push(LintFinding::warning(
            "declared_precision",
            "declared precision cannot be checked without exact submitted and accepted counts".into(),
            Some(PRECISION_ROW),
        )),
    }
}
