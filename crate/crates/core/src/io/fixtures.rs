use crate::error::Result;
use crate::lint::CampaignReport;

const FIXTURES: [(&str, &str); 4] = [
    (
        "exploit_experiment",
        include_str!("../../fixtures/exploit_experiment.json"),
    ),
    ("firefox_150", include_str!("../../fixtures/firefox_150.json")),
    (
        "firefox_opus46",
        include_str!("../../fixtures/firefox_opus46.json"),
    ),
    (
        "mythos_preview",
        include_str!("../../fixtures/mythos_preview.json"),
    ),
];

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(name, _)| *name)
}

pub fn fixture_source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, src)| *src)
}

/// Parses a built-in campaign document.
pub fn fixture(name: &str) -> Option<Result<CampaignReport>> {
    fixture_source(name).map(|src| super::parse_campaign(src, &format!("fixture:{name}")))
}

/// All built-in documents, in name order.
///
/// # Panics
/// If an embedded document fails to parse, which the test suite rules out.
pub fn fixtures() -> Vec<(&'static str, CampaignReport)> {
    FIXTURES
        .iter()
        .map(|(name, _)| {
            (
                *name,
                fixture(name).expect("listed").expect("embedded fixture parses"),
            )
        })
        .collect()
}
