use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::anchors::AnchorRow;
use super::table::Table;
use crate::cost::UnitCostResult;
use crate::error::{Error, Result};
use crate::lint::{ChecklistResult, LintFinding};
use crate::metrics::{Comparison, MetricsSummary, UnitCostRange};
use crate::model::display::{
    decimals, exact_money_cents, exact_money_whole, one_decimal, percent, six_significant, usd_whole_f64,
};
use crate::model::{Hours, Rational, Unit};
use crate::sensitivity::StudyResult;
use crate::sim::{BottleneckReport, SimResult};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Document {
                origin: "format".into(),
                message: format!("unknown output format {other:?}"),
            }),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Table => "table",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// A result that can be shown as an aligned table, lossless JSON or CSV.
///
/// Rounding happens only in the table and the `display` CSV columns; JSON
/// carries exact rationals and decimal-string money.
pub trait Render: Serialize {
    fn table(&self) -> Table;

    /// One CSV row per entity. Defaults to the display table.
    fn csv_table(&self) -> Table {
        self.table()
    }

    fn text(&self) -> String {
        self.table().to_text()
    }
}

pub fn render<R: Render + ?Sized>(value: &R, format: Format) -> Result<String> {
    match format {
        Format::Table => Ok(value.text()),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Document {
                origin: "json output".into(),
                message: e.to_string(),
            })?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => value.csv_table().to_csv(),
    }
}

const GAP: &str = "n/a";

fn range_display(r: &UnitCostRange, upper_bound: bool) -> String {
    format!(
        "{}{}–{}",
        if upper_bound { "< " } else { "" },
        exact_money_whole(&r.low.unit_cost),
        exact_money_whole(&r.high.unit_cost)
    )
}

/// (metric, exact, display) triples for a summary, in a fixed order.
fn summary_rows(s: &MetricsSummary) -> Vec<(String, String, String)> {
    let mut rows = Vec::new();
    let mut push = |name: &str, exact: Option<String>, shown: Option<String>| {
        rows.push((
            name.to_string(),
            exact.unwrap_or_default(),
            shown.unwrap_or_else(|| GAP.to_string()),
        ))
    };
    push(
        "accepted fraction",
        s.precision.map(|f| f.to_string()),
        s.precision.map(|f| percent(&f)),
    );
    push(
        "high-severity fraction",
        s.high_severity_fraction.map(|f| f.to_string()),
        s.high_severity_fraction.map(|f| percent(&f)),
    );
    push(
        "reports per accepted",
        s.reports_per_accepted.map(|r| r.to_string()),
        s.reports_per_accepted.map(|r| one_decimal(&r)),
    );
    push(
        "reports per high-severity",
        s.reports_per_high.map(|r| r.to_string()),
        s.reports_per_high.map(|r| one_decimal(&r)),
    );
    for u in &s.unit_costs {
        push(
            u.outcome.label(),
            Some(u.unit_cost.usd().to_string()),
            Some(format!(
                "{}{}",
                if s.cost_is_upper_bound { "< " } else { "" },
                exact_money_whole(&u.unit_cost)
            )),
        );
    }
    for r in &s.unit_cost_ranges {
        push(
            &format!("{} (range)", r.outcome.label()),
            Some(format!("{}..{}", r.low.unit_cost.usd(), r.high.unit_cost.usd())),
            Some(range_display(r, s.cost_is_upper_bound)),
        );
    }
    push(
        "fixes per maintainer hour",
        s.fixes_per_maintainer_hour.map(|r| r.to_string()),
        s.fixes_per_maintainer_hour.map(|r| decimals(&r, 3)),
    );
    for (k, v) in &s.context {
        push(k, Some(v.to_string()), Some(v.to_string()));
    }
    rows
}

impl Render for MetricsSummary {
    fn table(&self) -> Table {
        let mut t = Table::new(["metric", "value"]);
        for (name, _, shown) in summary_rows(self) {
            t.push([name, shown]);
        }
        t
    }

    fn csv_table(&self) -> Table {
        let mut t = Table::new(["campaign_id", "metric", "exact", "display"]);
        let id = self.campaign_id.clone().unwrap_or_default();
        for (name, exact, shown) in summary_rows(self) {
            t.push([id.clone(), name, exact, shown]);
        }
        t
    }

    fn text(&self) -> String {
        let mut out = String::new();
        if let Some(id) = &self.campaign_id {
            out.push_str(&format!("campaign: {id}\n"));
        }
        out.push_str(&self.table().to_text());
        if self.cost_is_upper_bound {
            out.push_str("costs use the upper end of the reported expenditure\n");
        }
        out
    }
}

/// Unit costs for one campaign.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct CostOutput {
    pub campaign_id: String,
    pub cost_is_upper_bound: bool,
    pub unit_costs: Vec<UnitCostResult>,
    pub unit_cost_ranges: Vec<UnitCostRange>,
}

impl Render for CostOutput {
    fn table(&self) -> Table {
        let mut t = Table::new(["outcome", "numerator", "denominator", "unit cost", "to the cent"]);
        for u in &self.unit_costs {
            t.push([
                u.outcome.key().to_string(),
                format!("${}", u.numerator),
                u.denominator.to_string(),
                exact_money_whole(&u.unit_cost),
                exact_money_cents(&u.unit_cost),
            ]);
        }
        for r in &self.unit_cost_ranges {
            t.push([
                format!("{} (range)", r.outcome.key()),
                format!("${}", r.low.numerator),
                r.count.to_string(),
                range_display(r, self.cost_is_upper_bound),
                format!(
                    "{}–{}",
                    exact_money_cents(&r.low.unit_cost),
                    exact_money_cents(&r.high.unit_cost)
                ),
            ]);
        }
        t
    }

    fn csv_table(&self) -> Table {
        let mut t = Table::new([
            "campaign_id",
            "outcome",
            "numerator_usd",
            "denominator",
            "unit_cost_lo_usd",
            "unit_cost_hi_usd",
            "display",
        ]);
        for u in &self.unit_costs {
            let exact = u.unit_cost.usd().to_string();
            t.push([
                self.campaign_id.clone(),
                u.outcome.key().to_string(),
                u.numerator.to_string(),
                u.denominator.to_string(),
                exact.clone(),
                exact,
                exact_money_whole(&u.unit_cost),
            ]);
        }
        for r in &self.unit_cost_ranges {
            t.push([
                self.campaign_id.clone(),
                r.outcome.key().to_string(),
                r.low.numerator.to_string(),
                r.count.to_string(),
                r.low.unit_cost.usd().to_string(),
                r.high.unit_cost.usd().to_string(),
                range_display(r, self.cost_is_upper_bound),
            ]);
        }
        t
    }
}

fn number(x: f64, unit: Unit) -> String {
    match unit {
        Unit::Money => usd_whole_f64(x),
        _ => six_significant(x),
    }
}

impl Render for [StudyResult] {
    fn table(&self) -> Table {
        let mut t = Table::new([
            "study", "target", "interval", "mean", "p05", "p50", "p95", "samples",
        ]);
        for r in self {
            let u = r.interval.unit();
            let m = &r.monte_carlo;
            t.push([
                r.id.clone(),
                r.target.name().to_string(),
                format!("[{}, {}]", number(r.interval.lo(), u), number(r.interval.hi(), u)),
                number(m.mean, u),
                number(m.p05, u),
                number(m.p50, u),
                number(m.p95, u),
                m.sample_count.to_string(),
            ]);
        }
        t
    }

    fn csv_table(&self) -> Table {
        let mut t = Table::new([
            "study", "target", "unit", "lo", "hi", "mean", "std_dev", "p05", "p50", "p95", "min", "max",
            "samples", "seed",
        ]);
        for r in self {
            let m = &r.monte_carlo;
            t.push([
                r.id.clone(),
                r.target.name().to_string(),
                r.interval.unit().name().to_string(),
                r.interval.lo().to_string(),
                r.interval.hi().to_string(),
                m.mean.to_string(),
                m.std_dev.to_string(),
                m.p05.to_string(),
                m.p50.to_string(),
                m.p95.to_string(),
                m.min.to_string(),
                m.max.to_string(),
                m.sample_count.to_string(),
                m.seed.to_string(),
            ]);
        }
        t
    }
}

/// A simulation run together with its bottleneck analysis.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct SimulationOutput {
    pub result: SimResult,
    pub bottleneck: BottleneckReport,
}

fn opt_rational(r: Option<Rational>, places: u32) -> String {
    r.map_or_else(|| GAP.to_string(), |r| decimals(&r, places))
}

impl Render for SimulationOutput {
    fn table(&self) -> Table {
        let mut t = Table::new([
            "stage",
            "capacity_h_per_week",
            "items_in",
            "items_out",
            "dropped",
            "end_backlog",
            "served",
            "busy_hours",
            "utilization",
            "served_per_week",
        ]);
        for s in &self.result.stages {
            t.push([
                s.stage.name().to_string(),
                s.weekly_capacity_hours
                    .map_or_else(|| "unbounded".to_string(), |h| h.to_string()),
                s.items_in.to_string(),
                s.items_out.to_string(),
                s.items_dropped.to_string(),
                s.end_backlog.to_string(),
                s.served.to_string(),
                s.busy_hours.to_string(),
                opt_rational(s.utilization, 3),
                decimals(&s.throughput_per_week, 2),
            ]);
        }
        t
    }

    fn text(&self) -> String {
        let r = &self.result;
        let mut out = self.table().to_text();
        let mut t = Table::new(["quantity", "value"]);
        t.push(["seed".to_string(), r.seed.to_string()]);
        t.push(["horizon weeks".to_string(), r.horizon_weeks.to_string()]);
        t.push(["arrivals".to_string(), r.arrivals.to_string()]);
        t.push(["accepted".to_string(), r.accepted.to_string()]);
        t.push([
            "accepted fixes shipped".to_string(),
            r.accepted_fixes_shipped.to_string(),
        ]);
        for (sev, n) in &r.shipped_by_severity {
            t.push([format!("shipped {sev:?}").to_lowercase(), n.to_string()]);
        }
        t.push([
            "fixes per maintainer hour".to_string(),
            opt_rational(r.accepted_fixes_per_maintainer_hour, 3),
        ]);
        t.push(["total cost".to_string(), format!("${}", r.total)]);
        t.push([
            "bottleneck".to_string(),
            self.bottleneck
                .bottleneck
                .map_or_else(|| "none".to_string(), |s| s.name().to_string()),
        ]);
        if let Some(rank) = self.bottleneck.ranking.first().filter(|r| r.is_bottleneck) {
            t.push([
                "backlog growth per week".to_string(),
                decimals(&rank.backlog_growth_per_week, 2),
            ]);
        }
        t.push([
            "marginal fixes per week (+1 h)".to_string(),
            opt_rational(self.bottleneck.marginal_fixes_per_week, 3),
        ]);
        out.push('\n');
        out.push_str(&t.to_text());
        out
    }

    fn csv_table(&self) -> Table {
        let mut t = Table::new([
            "seed",
            "stage",
            "weekly_capacity_hours",
            "items_in",
            "items_out",
            "items_dropped",
            "end_backlog",
            "served",
            "busy_hours",
            "completed_service_hours",
            "utilization",
            "is_bottleneck",
        ]);
        for s in &self.result.stages {
            t.push([
                self.result.seed.to_string(),
                s.stage.name().to_string(),
                s.weekly_capacity_hours
                    .map(|h: Hours| h.to_string())
                    .unwrap_or_default(),
                s.items_in.to_string(),
                s.items_out.to_string(),
                s.items_dropped.to_string(),
                s.end_backlog.to_string(),
                s.served.to_string(),
                s.busy_hours.to_string(),
                s.completed_service_hours.to_string(),
                s.utilization.map(|u| u.to_string()).unwrap_or_default(),
                (self.bottleneck.bottleneck == Some(s.stage)).to_string(),
            ]);
        }
        t
    }
}

impl Render for [LintFinding] {
    fn table(&self) -> Table {
        let mut t = Table::new(["severity", "field", "reporting row", "message"]);
        for f in self {
            t.push([
                f.severity.name().to_string(),
                f.field.clone(),
                f.reporting_row.clone().unwrap_or_default(),
                f.message.clone(),
            ]);
        }
        t
    }

    fn text(&self) -> String {
        if self.is_empty() {
            return "no findings\n".to_string();
        }
        let fatal = self.iter().filter(|f| f.is_fatal()).count();
        format!(
            "{}{fatal} fatal, {} warning(s)\n",
            self.table().to_text(),
            self.len() - fatal
        )
    }
}

impl Render for ChecklistResult {
    fn table(&self) -> Table {
        let mut t = Table::new(["artifact", "item", "status", "evidence"]);
        for i in &self.items {
            t.push([
                i.artifact.key().to_string(),
                i.label.clone(),
                if i.passed { "pass" } else { "FAIL" }.to_string(),
                i.evidence.clone().unwrap_or_default(),
            ]);
        }
        t
    }

    fn text(&self) -> String {
        format!(
            "ownership model: {}\n{}overall: {}\n",
            self.ownership_model,
            self.table().to_text(),
            if self.passed { "pass" } else { "fail" }
        )
    }
}

fn comparison_table(c: &Comparison, gap: &str) -> Table {
    let mut t = Table::new([
        "campaign_id",
        "accepted_fraction",
        "high_severity_fraction",
        "reports_per_accepted",
        "reports_per_high",
        "validation_hours",
        "maintainer_review_hours",
        "cost_per_accepted",
        "cost_per_finding_range",
    ]);
    let or_gap = |s: Option<String>| s.unwrap_or_else(|| gap.to_string());
    for row in &c.rows {
        let s = &row.summary;
        t.push([
            row.campaign_id.clone(),
            or_gap(s.precision.map(|f| percent(&f))),
            or_gap(s.high_severity_fraction.map(|f| percent(&f))),
            or_gap(s.reports_per_accepted.map(|r| one_decimal(&r))),
            or_gap(s.reports_per_high.map(|r| one_decimal(&r))),
            or_gap(row.validation_hours.map(|h| h.to_string())),
            or_gap(row.maintainer_review_hours.map(|h| h.to_string())),
            or_gap(
                s.unit_cost(crate::cost::OutcomeKind::Accepted)
                    .map(|u| exact_money_whole(&u.unit_cost)),
            ),
            or_gap(
                s.unit_cost_ranges
                    .first()
                    .map(|r| range_display(r, s.cost_is_upper_bound)),
            ),
        ]);
    }
    t
}

impl Render for Comparison {
    fn table(&self) -> Table {
        comparison_table(self, GAP)
    }

    fn csv_table(&self) -> Table {
        comparison_table(self, "")
    }
}

impl Render for [AnchorRow] {
    fn table(&self) -> Table {
        let mut t = Table::new(["source", "quantity", "value"]);
        for r in self {
            t.push([r.source.clone(), r.quantity.clone(), r.display.clone()]);
        }
        t
    }

    fn csv_table(&self) -> Table {
        let mut t = Table::new(["source", "quantity", "display", "exact"]);
        for r in self {
            t.push([
                r.source.clone(),
                r.quantity.clone(),
                r.display.clone(),
                serde_json::to_string(&r.value).expect("anchor value serializes"),
            ]);
        }
        t
    }
}
