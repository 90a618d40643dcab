use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{resolve_config, ParsedConfig, RawConfig};
use crate::Error;

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Record emitted next to every run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Task name, or `preset:<name>`.
    pub task: String,
    /// Resolved configuration with every default written out.
    pub config: Value,
    pub wall_clock_seconds: f64,
    /// Largest `|‖x(t_end)‖² − ‖x(0)‖²|` over the run's evolutions.
    pub norm_drift: Option<f64>,
    pub warnings: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(task: impl Into<String>, config: Value) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            task: task.into(),
            config,
            wall_clock_seconds: 0.0,
            norm_drift: None,
            warnings: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn preset(&self) -> Option<&str> {
        self.task.strip_prefix("preset:")
    }

    pub fn write(&self, dir: &Path) -> Result<(), Error> {
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))?;
        std::fs::write(&path, text + "\n").map_err(|e| Error::io(path, e))
    }
}

pub fn parse_manifest(text: &str) -> Result<RunManifest, Error> {
    let mut de = serde_json::Deserializer::from_str(text);
    let manifest: RunManifest = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        Error::config(format!("manifest.{path}"), e.inner().to_string())
    })?;
    de.end().map_err(|e| Error::config("manifest", e.to_string()))?;
    Ok(manifest)
}

/// Recovers the scenario a manifest was produced from.
pub fn config_from_manifest(manifest: &RunManifest, strict: bool) -> Result<ParsedConfig, Error> {
    if let Some(name) = manifest.preset() {
        return Err(Error::config(
            "config",
            format!("manifest belongs to preset `{name}`; rerun it with `preset {name}`"),
        ));
    }
    let (raw, unknown) = RawConfig::from_json(&manifest.config.to_string())?;
    resolve_config(raw, unknown, strict)
}

fn looks_like_manifest(text: &str) -> bool {
    serde_json::from_str::<Value>(text)
        .ok()
        .and_then(|v| v.as_object().map(|o| o.contains_key("tool") && o.contains_key("config")))
        .unwrap_or(false)
}

/// Raw scenario document and its unknown keys, read from either a scenario
/// file or a run manifest.
pub fn raw_config_from_text(text: &str) -> Result<(RawConfig, Vec<String>), Error> {
    if looks_like_manifest(text) {
        let manifest = parse_manifest(text)?;
        if let Some(name) = manifest.preset() {
            return Err(Error::config(
                "config",
                format!("manifest belongs to preset `{name}`; rerun it with `preset {name}`"),
            ));
        }
        RawConfig::from_json(&manifest.config.to_string())
    } else {
        RawConfig::from_json(text)
    }
}

/// Accepts either a scenario document or a run manifest.
pub fn parse_config_or_manifest(text: &str, strict: bool) -> Result<ParsedConfig, Error> {
    let (raw, unknown) = raw_config_from_text(text)?;
    resolve_config(raw, unknown, strict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::parse_config;

    #[test]
    fn manifest_round_trip() {
        let parsed = parse_config(r#"{"N": 3, "g": 0.7, "theta": 1.0}"#, true).unwrap();
        let mut m = RunManifest::new("evolve", parsed.config.to_json());
        m.norm_drift = Some(1e-12);
        let text = serde_json::to_string(&m).unwrap();
        let back = parse_manifest(&text).unwrap();
        assert_eq!(back, m);
        let again = parse_config_or_manifest(&text, true).unwrap();
        assert_eq!(again.config, parsed.config);
    }

    #[test]
    fn preset_manifest_is_not_a_scenario() {
        let m = RunManifest::new("preset:fig4b", serde_json::json!({"preset": "fig4b"}));
        let err = config_from_manifest(&m, false).unwrap_err();
        assert!(err.to_string().contains("preset fig4b"));
    }

    #[test]
    fn malformed_manifest() {
        assert!(parse_manifest(r#"{"tool": "x"}"#).is_err());
        let err = parse_manifest(r#"{"tool": 1, "version": "", "task": "", "config": {}, "wall_clock_seconds": 0, "norm_drift": null, "warnings": []}"#)
            .unwrap_err();
        assert_eq!(err.field(), Some("manifest.tool"));
    }
}
