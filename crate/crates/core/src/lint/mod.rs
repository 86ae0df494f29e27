//! Campaign disclosure linting and review-package checklists.

mod campaign;
mod report;
mod review;

pub use campaign::{has_fatal, validate_campaign_report, FindingSeverity, LintFinding, REPORTING_FIELDS};
pub use report::{
    BoundKind, CampaignReport, ContextValue, Count, CountRange, Expenditure, GroundingEvidence, ImpactStatus,
    MoneyRange, PatchStatus, SeveritySplit, SCHEMA_VERSION,
};
pub use review::{
    check_review_package, parse_review_package, Artifact, ArtifactFlag, ChecklistItem, ChecklistResult,
    OwnershipModel, ReviewPackage, ReviewPolicy,
};

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> CampaignReport {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn missing_validation_hours_warns_with_row() {
        let r = CampaignReport::new("x");
        let f = validate_campaign_report(&r);
        let v: Vec<_> = f.iter().filter(|f| f.field == "validation_hours").collect();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].severity, FindingSeverity::Warning);
        assert_eq!(v[0].reporting_row.as_deref(), Some("Validation hours"));
        assert_eq!(f.len(), 16);
    }

    #[test]
    fn inverted_funnel_is_fatal() {
        let r = parse(
            r#"{"schema_version":"1","campaign_id":"x","submitted_reports":20,"accepted_findings":30}"#,
        );
        let f = validate_campaign_report(&r);
        assert!(f.iter().any(|f| f.is_fatal() && f.field == "accepted_findings"));
    }

    #[test]
    fn range_counts_only_fail_when_provable() {
        let r = parse(
            r#"{"schema_version":"1","campaign_id":"x","submitted_reports":{"lo":24,"hi":48},"accepted_findings":30}"#,
        );
        assert!(!has_fatal(&validate_campaign_report(&r)));
        let r = parse(
            r#"{"schema_version":"1","campaign_id":"x","submitted_reports":{"lo":24,"hi":48},"accepted_findings":49}"#,
        );
        assert!(has_fatal(&validate_campaign_report(&r)));
    }

    #[test]
    fn exhaustive_severity_must_sum() {
        let ok = parse(
            r#"{"schema_version":"1","campaign_id":"x","accepted_findings":271,"severity":{"high":180,"moderate":80,"low":11,"exhaustive":true}}"#,
        );
        assert!(!validate_campaign_report(&ok)
            .iter()
            .any(|f| f.field == "severity"));
        let bad = parse(
            r#"{"schema_version":"1","campaign_id":"x","accepted_findings":272,"severity":{"high":180,"moderate":80,"low":11,"exhaustive":true}}"#,
        );
        assert!(validate_campaign_report(&bad)
            .iter()
            .any(|f| f.is_fatal() && f.field == "severity"));
        let partial = parse(
            r#"{"schema_version":"1","campaign_id":"x","accepted_findings":272,"severity":{"high":180,"moderate":80,"low":11}}"#,
        );
        assert!(!has_fatal(&validate_campaign_report(&partial)));
    }

    #[test]
    fn unknown_fields_warn_and_round_trip() {
        let r = parse(r#"{"schema_version":"1","campaign_id":"x","vendor_notes":"hi"}"#);
        let f = validate_campaign_report(&r);
        assert!(f.iter().any(|f| f.field == "vendor_notes" && !f.is_fatal()));
        let back: CampaignReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn unknown_severity_label_rejected() {
        let res: Result<CampaignReport, _> =
            serde_json::from_str(r#"{"schema_version":"1","campaign_id":"x","severity":{"critical":1}}"#);
        assert!(res.is_err());
    }

    #[test]
    fn declared_precision_mismatch_warns() {
        let r = parse(
            r#"{"schema_version":"1","campaign_id":"x","submitted_reports":112,"accepted_findings":22,"declared_precision":"1/5"}"#,
        );
        let f = validate_campaign_report(&r);
        assert!(f.iter().any(|f| f.field == "declared_precision" && !f.is_fatal()));
        let r = parse(
            r#"{"schema_version":"1","campaign_id":"x","submitted_reports":112,"accepted_findings":22,"declared_precision":"11/56"}"#,
        );
        assert!(!validate_campaign_report(&r)
            .iter()
            .any(|f| f.field == "declared_precision"));
    }

    #[test]
    fn findings_sorted_and_idempotent() {
        let r =
            parse(r#"{"schema_version":"1","campaign_id":"","submitted_reports":20,"accepted_findings":30}"#);
        let a = validate_campaign_report(&r);
        let mut sorted = a.clone();
        sorted.sort();
        assert_eq!(a, sorted);
        assert_eq!(a, validate_campaign_report(&r));
        assert!(a[0].is_fatal());
    }
}
