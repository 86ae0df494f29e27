mod common;

use bugonomics::io::{campaign_to_json, parse_campaign};
use bugonomics::lint::{
    check_review_package, has_fatal, validate_campaign_report, Artifact, ArtifactFlag, Count,
    FindingSeverity, OwnershipModel, ReviewPackage, ReviewPolicy, REPORTING_FIELDS,
};
use common::{complete_report, conformant_report, review_package};
use proptest::prelude::*;
use proptest::sample::select;

#[test]
fn complete_report_is_clean() {
    assert_eq!(validate_campaign_report(&complete_report()), vec![]);
}

#[test]
fn each_missing_field_gives_one_warning() {
    let full: serde_json::Value = serde_json::from_str(&campaign_to_json(&complete_report())).unwrap();
    for (field, row) in REPORTING_FIELDS {
        let mut doc = full.clone();
        doc.as_object_mut().unwrap().remove(field).expect(field);
        let report = parse_campaign(&doc.to_string(), field).unwrap();
        let findings = validate_campaign_report(&report);
        assert_eq!(findings.len(), 1, "{field}: {findings:?}");
        assert_eq!(findings[0].severity, FindingSeverity::Warning);
        assert_eq!(findings[0].field, field);
        assert_eq!(findings[0].reporting_row.as_deref(), Some(row));
    }
}

#[test]
fn inversions_are_fatal() {
    let mut r = complete_report();
    r.accepted_findings = Some(Count::Exact(113));
    let findings = validate_campaign_report(&r);
    assert!(findings
        .iter()
        .any(|f| f.is_fatal() && f.field == "accepted_findings"));

    let mut r = complete_report();
    r.raw_candidates = Some(Count::Exact(10));
    assert!(has_fatal(&validate_campaign_report(&r)));
}

#[test]
fn required_sets_decide_checklists() {
    let policy = ReviewPolicy::default();
    for model in OwnershipModel::ALL {
        let required = policy.required(model).clone();
        let full = required.iter().fold(ReviewPackage::new(model), |p, a| p.with(*a));
        assert!(check_review_package(&full, &policy).passed, "{model:?}");
        for missing in &required {
            let mut pkg = full.clone();
            pkg.artifacts.remove(missing);
            let result = check_review_package(&pkg, &policy);
            assert!(!result.passed);
            assert_eq!(result.failed_labels(), vec![missing.label()]);
        }
    }
    let human_driven = policy.required(OwnershipModel::HumanDrivenLlm);
    assert_eq!(human_driven.len(), 9);
    assert!(human_driven.contains(&Artifact::PromptSpec));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn generated_reports_lint_clean(r in conformant_report()) {
        let findings = validate_campaign_report(&r);
        prop_assert!(!has_fatal(&findings), "{findings:?}");
    }

    #[test]
    fn json_round_trip(r in conformant_report()) {
        let text = campaign_to_json(&r);
        prop_assert_eq!(parse_campaign(&text, "rt").unwrap(), r);
    }

    #[test]
    fn lint_output_sorted_and_stable(r in conformant_report()) {
        let a = validate_campaign_report(&r);
        let mut sorted = a.clone();
        sorted.sort();
        prop_assert_eq!(&a, &sorted);
        prop_assert_eq!(a, validate_campaign_report(&r));
    }

    #[test]
    fn adding_a_flag_never_hurts(pkg in review_package(), extra in select(Artifact::ALL.to_vec())) {
        let policy = ReviewPolicy::default();
        let before = check_review_package(&pkg, &policy);
        let mut more = pkg.clone();
        more.artifacts.insert(extra, ArtifactFlag::present());
        let after = check_review_package(&more, &policy);
        prop_assert!(!before.passed || after.passed);
        for label in after.failed_labels() {
            prop_assert!(before.failed_labels().contains(&label));
        }
    }
}
