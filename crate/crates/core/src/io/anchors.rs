use serde::Serialize;

use super::fixtures::fixture;
use crate::cost::{cost_per_validated_finding, stage_cost, unit_cost, OutcomeKind};
use crate::error::{Error, Result};
use crate::lint::{CampaignReport, ContextValue, Count, Expenditure};
use crate::metrics::campaign_summary;
use crate::model::display::{exact_money_whole, money_whole, one_decimal, percent};
use crate::model::{ExactMoney, Fraction, HourlyRate, Hours, Money, Rational, Stage, StageEffort};

/// Exact value behind an anchor row, for lossless output.
#[derive(Clone, PartialEq, Debug, Serialize)]
#[serde(untagged)]
pub enum AnchorValue {
    Count(u64),
    CountRange { lo: u64, hi: u64 },
    Fraction(Fraction),
    Rational(Rational),
    Money(Money),
    MoneyRange { lo: ExactMoney, hi: ExactMoney },
    Text(String),
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct AnchorRow {
    pub source: String,
    pub quantity: String,
    pub display: String,
    pub value: AnchorValue,
}

/// An orientation band: a lower and upper unit or total cost.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Band {
    pub quantity: String,
    pub lo: ExactMoney,
    pub hi: ExactMoney,
}

impl Band {
    pub fn display(&self) -> String {
        format!("{}–{}", exact_money_whole(&self.lo), exact_money_whole(&self.hi))
    }
}

fn load(name: &str) -> Result<CampaignReport> {
    fixture(name).ok_or_else(|| Error::Document {
        origin: "fixtures".into(),
        message: format!("missing fixture {name}"),
    })?
}

fn count_value(c: Count) -> AnchorValue {
    match c.exact() {
        Some(n) => AnchorValue::Count(n),
        None => AnchorValue::CountRange {
            lo: c.lo(),
            hi: c.hi(),
        },
    }
}

fn missing(field: &str, name: &str) -> Error {
    Error::Document {
        origin: format!("fixture:{name}"),
        message: format!("missing {field}"),
    }
}

/// The public anchor quantities and every figure derived from them, read from
/// the built-in fixtures and computed through the metrics engine.
pub fn anchors() -> Result<Vec<AnchorRow>> {
    let mut rows = Vec::new();
    let mut row = |source: &str, quantity: &str, display: String, value: AnchorValue| {
        rows.push(AnchorRow {
            source: source.to_string(),
            quantity: quantity.to_string(),
            display,
            value,
        })
    };

    let mythos = load("mythos_preview")?;
    let id = mythos.campaign_id.as_str();
    if let Some(Expenditure::Range(r)) = mythos.total_expenditure {
        row(
            id,
            "campaign cost",
            format!("< {}", money_whole(r.hi)),
            AnchorValue::Money(r.hi),
        );
    }
    let runs = mythos.run_count.ok_or_else(|| missing("run_count", id))?;
    row(id, "campaign size (runs)", runs.to_string(), count_value(runs));
    let findings = mythos
        .submitted_reports
        .ok_or_else(|| missing("submitted_reports", id))?;
    row(
        id,
        "findings (several dozen)",
        findings.to_string(),
        count_value(findings),
    );
    let summary = campaign_summary(&mythos)?;
    let range = summary
        .unit_cost_range(OutcomeKind::ReportedFinding)
        .ok_or_else(|| missing("per-finding range", id))?;
    row(
        id,
        "implied cost per finding",
        format!(
            "< {}–{}",
            exact_money_whole(&range.low.unit_cost),
            exact_money_whole(&range.high.unit_cost)
        ),
        AnchorValue::MoneyRange {
            lo: range.low.unit_cost,
            hi: range.high.unit_cost,
        },
    );

    let firefox = load("firefox_opus46")?;
    let id = firefox.campaign_id.as_str();
    let summary = campaign_summary(&firefox)?;
    for (label, c) in [
        ("submitted reports", firefox.submitted_reports),
        ("accepted vulnerabilities", firefox.accepted_findings),
        (
            "high-severity vulnerabilities",
            firefox.severity.and_then(|s| s.high).map(Count::Exact),
        ),
    ] {
        let c = c.ok_or_else(|| missing(label, id))?;
        row(id, label, c.to_string(), count_value(c));
    }
    let pi_s = summary.precision.ok_or_else(|| missing("precision", id))?;
    row(
        id,
        "accepted fraction",
        percent(&pi_s),
        AnchorValue::Fraction(pi_s),
    );
    let pi_h = summary
        .high_severity_fraction
        .ok_or_else(|| missing("high severity", id))?;
    row(
        id,
        "high-severity fraction",
        percent(&pi_h),
        AnchorValue::Fraction(pi_h),
    );
    let rpa = summary
        .reports_per_accepted
        .ok_or_else(|| missing("accepted", id))?;
    row(
        id,
        "reports per accepted vulnerability",
        one_decimal(&rpa),
        AnchorValue::Rational(rpa),
    );
    let rph = summary
        .reports_per_high
        .ok_or_else(|| missing("high severity", id))?;
    row(
        id,
        "reports per high-severity vulnerability",
        one_decimal(&rph),
        AnchorValue::Rational(rph),
    );

    let ff150 = load("firefox_150")?;
    let id = ff150.campaign_id.as_str();
    let accepted = ff150
        .accepted_findings
        .ok_or_else(|| missing("accepted_findings", id))?;
    row(
        id,
        "Mythos-identified bugs",
        accepted.to_string(),
        count_value(accepted),
    );
    let split = ff150.severity.ok_or_else(|| missing("severity", id))?;
    let (h, m, l) = (
        split.high.unwrap_or(0),
        split.moderate.unwrap_or(0),
        split.low.unwrap_or(0),
    );
    row(
        id,
        "severity split",
        format!("{h} high, {m} moderate, {l} low"),
        AnchorValue::Text(format!("{h}/{m}/{l}")),
    );
    if let Some(ContextValue::Count(n)) = ff150.context_value("april_total_security_fixes") {
        row(
            id,
            "April total security fixes",
            n.to_string(),
            AnchorValue::Count(*n),
        );
    }

    let exploit = load("exploit_experiment")?;
    let id = exploit.campaign_id.as_str();
    let spend = exploit
        .total_expenditure
        .ok_or_else(|| missing("total_expenditure", id))?
        .basis();
    let successes = exploit
        .impact_status
        .ok_or_else(|| missing("impact_status", id))?
        .exploitable;
    row(
        id,
        "exploit-development spend",
        format!("~{} for {successes} crude exploits", money_whole(spend)),
        AnchorValue::Money(spend),
    );
    let per = campaign_summary(&exploit)?
        .unit_cost(OutcomeKind::ImpactBacked)
        .map(|u| u.unit_cost)
        .ok_or_else(|| missing("per-exploit cost", id))?;
    row(
        id,
        "cost per successful exploit",
        format!("~{}", exact_money_whole(&per)),
        AnchorValue::MoneyRange { lo: per, hi: per },
    );

    for band in orientation_bands()? {
        row(
            "firefox_opus46",
            &band.quantity,
            band.display(),
            AnchorValue::MoneyRange {
                lo: band.lo,
                hi: band.hi,
            },
        );
    }
    Ok(rows)
}

/// Hypothetical cost bands over the Firefox counts: generation spend of
/// $5,000 to $20,000 and validation at 0.5 to 2 hours per report at $100 to $250 an hour.
pub fn orientation_bands() -> Result<Vec<Band>> {
    let firefox = load("firefox_opus46")?;
    let counts = firefox
        .funnel_counts()
        .ok_or_else(|| missing("exact funnel", "firefox_opus46"))??;
    let n_c = counts.submitted_reports();
    let pi_s = Fraction::new(counts.accepted_findings(), n_c)?;
    let high = counts
        .high_severity()
        .ok_or_else(|| missing("high severity", "firefox_opus46"))?;

    let spend = [Money::from_usd(5_000), Money::from_usd(20_000)];
    let validation = [
        stage_cost(
            n_c,
            &StageEffort {
                stage: Stage::Validation,
                hours_per_item: "0.5".parse::<Hours>()?,
                rate: HourlyRate::from_usd(100),
            },
        )?,
        stage_cost(
            n_c,
            &StageEffort {
                stage: Stage::Validation,
                hours_per_item: Hours::whole(2),
                rate: HourlyRate::from_usd(250),
            },
        )?,
    ];

    let per_accepted = |m: Money| -> Result<ExactMoney> {
        Ok(cost_per_validated_finding(m, Money::ZERO, n_c, pi_s)?.unit_cost)
    };
    let per_high = |m: Money| -> Result<ExactMoney> {
        Ok(unit_cost(
            OutcomeKind::HighSeverity,
            m,
            Rational::from_integer(i128::from(high)),
        )?
        .unit_cost)
    };
    let band = |quantity: &str, f: &dyn Fn(Money) -> Result<ExactMoney>, ends: [Money; 2]| -> Result<Band> {
        Ok(Band {
            quantity: quantity.to_string(),
            lo: f(ends[0])?,
            hi: f(ends[1])?,
        })
    };
    let total = |m: Money| -> Result<ExactMoney> { Ok(ExactMoney::from(m)) };
    Ok(vec![
        band("generation cost per accepted (orientation)", &per_accepted, spend)?,
        band(
            "generation cost per high-severity (orientation)",
            &per_high,
            spend,
        )?,
        band("validation cost, all reports (orientation)", &total, validation)?,
        band(
            "validation cost per accepted (orientation)",
            &per_accepted,
            validation,
        )?,
        band(
            "validation cost per high-severity (orientation)",
            &per_high,
            validation,
        )?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bands_display() {
        let shown: Vec<String> = orientation_bands().unwrap().iter().map(Band::display).collect();
        assert_eq!(
            shown,
            [
                "$227–$909",
                "$357–$1,429",
                "$5,600–$56,000",
                "$255–$2,545",
                "$400–$4,000"
            ]
        );
    }

    #[test]
    fn anchor_rows() {
        let rows = anchors().unwrap();
        let find = |q: &str| rows.iter().find(|r| r.quantity == q).unwrap().display.clone();
        assert_eq!(find("implied cost per finding"), "< $417–$833");
        assert_eq!(find("accepted fraction"), "19.6%");
        assert_eq!(find("high-severity fraction"), "12.5%");
        assert_eq!(find("reports per accepted vulnerability"), "5.1");
        assert_eq!(find("reports per high-severity vulnerability"), "8.0");
        assert_eq!(find("April total security fixes"), "423");
        assert_eq!(find("cost per successful exploit"), "~$2,000");
    }
}
