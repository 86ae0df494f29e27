//! Document loading, built-in fixtures and output rendering.

mod anchors;
mod fixtures;
mod render;
mod table;

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lint::{parse_review_package, CampaignReport, ReviewPackage, ReviewPolicy, SCHEMA_VERSION};
use crate::sensitivity::SensitivityDocument;
use crate::sim::PipelineConfig;

pub use anchors::{anchors, orientation_bands, AnchorRow, AnchorValue, Band};
pub use fixtures::{fixture, fixture_names, fixture_source, fixtures};
pub use render::{render, CostOutput, Format, Render, SimulationOutput};
pub use table::Table;

fn parse_error(origin: &str, e: serde_json::Error) -> Error {
    Error::Parse {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Checks the syntax and `schema_version` before structural parsing, so a
/// newer document is reported as unsupported rather than malformed.
fn check_version(text: &str, origin: &str) -> Result<()> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_error(origin, e))?;
    let Value::Object(map) = &value else {
        return Err(Error::Document {
            origin: origin.to_string(),
            message: "expected a JSON object".into(),
        });
    };
    match map.get("schema_version") {
        Some(Value::String(v)) if v == SCHEMA_VERSION => Ok(()),
        Some(Value::String(v)) => Err(Error::UnsupportedSchemaVersion(v.clone())),
        Some(other) => Err(Error::UnsupportedSchemaVersion(other.to_string())),
        None => Err(Error::Document {
            origin: origin.to_string(),
            message: "missing schema_version".into(),
        }),
    }
}

fn parse_versioned<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    check_version(text, origin)?;
    serde_json::from_str(text).map_err(|e| parse_error(origin, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_campaign(text: &str, origin: &str) -> Result<CampaignReport> {
    parse_versioned(text, origin)
}

/// Reads a campaign document; `fixture:<name>` loads a built-in one.
pub fn load_campaign(path: impl AsRef<Path>) -> Result<CampaignReport> {
    let path = path.as_ref();
    if let Some(name) = path.to_str().and_then(|p| p.strip_prefix("fixture:")) {
        return fixture(name).ok_or_else(|| Error::Document {
            origin: path.display().to_string(),
            message: format!("no built-in fixture named {name:?}"),
        })?;
    }
    parse_campaign(&read_text(path)?, &path.display().to_string())
}

/// Lossless JSON encoding of a report; `parse_campaign` reads it back unchanged.
pub fn campaign_to_json(report: &CampaignReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn parse_sensitivity(text: &str, origin: &str) -> Result<SensitivityDocument> {
    let repr: crate::sensitivity::DocumentRepr = parse_versioned(text, origin)?;
    repr.into_document()
}

pub fn load_sensitivity(path: impl AsRef<Path>) -> Result<SensitivityDocument> {
    let path = path.as_ref();
    parse_sensitivity(&read_text(path)?, &path.display().to_string())
}

/// A simulator scenario: one pipeline configuration.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub pipeline: PipelineConfig,
}

pub fn parse_scenario(text: &str, origin: &str) -> Result<PipelineConfig> {
    let doc: ScenarioDocument = parse_versioned(text, origin)?;
    doc.pipeline.validate()?;
    Ok(doc.pipeline)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<PipelineConfig> {
    let path = path.as_ref();
    parse_scenario(&read_text(path)?, &path.display().to_string())
}

pub fn load_review_package(path: impl AsRef<Path>) -> Result<ReviewPackage> {
    let path = path.as_ref();
    let origin = path.display().to_string();
    let text = read_text(path)?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| parse_error(&origin, e))?;
    // The version key is optional here; strip it before structural parsing.
    if let Some(map) = value.as_object_mut() {
        match map.remove("schema_version") {
            None => {}
            Some(Value::String(v)) if v == SCHEMA_VERSION => {}
            Some(other) => {
                return Err(Error::UnsupportedSchemaVersion(
                    other.as_str().map_or_else(|| other.to_string(), str::to_string),
                ))
            }
        }
    }
    parse_review_package(&value.to_string(), &origin)
}

pub fn load_policy(path: impl AsRef<Path>) -> Result<ReviewPolicy> {
    ReviewPolicy::from_json(&read_text(path.as_ref())?)
}
