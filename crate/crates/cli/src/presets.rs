//! Named parameter sets for the three cases.
//!
//! The built-in registry holds one preset per case, named after the case.
//! A registry file with the same JSON layout may add presets or replace
//! built-ins by name.

use std::collections::BTreeMap;
use std::path::Path;

use numdiff_core::{Case, Model};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const REGISTRY_VERSION: u32 = 1;
pub const PRESETS_ENV: &str = "NUMDIFF_PRESETS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub name: String,
    pub case: Case,
    pub params: BTreeMap<String, f64>,
    #[serde(default = "user_source")]
    pub source: String,
}

fn user_source() -> String {
    "user".to_string()
}

impl Preset {
    fn from_model(name: &str, model: &Model, source: &str) -> Self {
        Self {
            name: name.to_string(),
            case: model.case(),
            params: model.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            source: source.to_string(),
        }
    }

    pub fn model(&self) -> Result<Model, CliError> {
        let params: Vec<(&str, f64)> = self.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        Model::from_params(self.case, &params)
            .map_err(|e| CliError::usage(format!("preset `{}`: {e}", self.name)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Registry {
    pub version: u32,
    pub presets: Vec<Preset>,
}

impl Registry {
    pub fn builtin() -> Self {
        let source = |case: Case| match case {
            Case::Temperature => "default",
            _ => "published",
        };
        Self {
            version: REGISTRY_VERSION,
            presets: Case::ALL
                .into_iter()
                .map(|case| Preset::from_model(case.name(), &case.default_model(), source(case)))
                .collect(),
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let registry: Registry = serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: origin.to_string(),
            line: e.line() as u64,
            column: e.column(),
            message: e.to_string(),
        })?;
        if registry.version != REGISTRY_VERSION {
            return Err(CliError::usage(format!(
                "{origin}: unsupported preset registry version {} (expected {REGISTRY_VERSION})",
                registry.version
            )));
        }
        for preset in &registry.presets {
            preset.model().map_err(|e| CliError::usage(format!("{origin}: {e}")))?;
        }
        Ok(registry)
    }

    /// Built-ins, overlaid with the file at `path` if one is given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut registry = Self::builtin();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            registry.merge(Self::parse(&text, &path.display().to_string())?);
        }
        Ok(registry)
    }

    fn merge(&mut self, other: Registry) {
        for preset in other.presets {
            match self.presets.iter_mut().find(|p| p.name == preset.name) {
                Some(existing) => *existing = preset,
                None => self.presets.push(preset),
            }
        }
    }

    pub fn get(&self, name: &str) -> Result<&Preset, CliError> {
        self.presets.iter().find(|p| p.name == name).ok_or_else(|| {
            let known: Vec<&str> = self.presets.iter().map(|p| p.name.as_str()).collect();
            CliError::usage(format!("unknown preset `{name}` (known: {})", known.join(", ")))
        })
    }
}

/// Parses `name=value`.
pub fn parse_override(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{text}`"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", value.trim()))?;
    if !value.is_finite() {
        return Err(format!("`{name}` must be finite"));
    }
    Ok((name.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_rebuild_their_models() {
        let registry = Registry::builtin();
        assert_eq!(registry.presets.len(), 3);
        for case in Case::ALL {
            let preset = registry.get(case.name()).unwrap();
            assert_eq!(preset.model().unwrap(), case.default_model());
        }
        assert_eq!(registry.get("temperature").unwrap().source, "default");
    }

    #[test]
    fn registry_round_trips_through_json() {
        let registry = Registry::builtin();
        let text = serde_json::to_string(&registry).unwrap();
        assert_eq!(Registry::parse(&text, "mem").unwrap(), registry);
    }

    #[test]
    fn file_presets_replace_and_extend() {
        let text = r#"{"version":1,"presets":[
            {"name":"logistic","case":"logistic","params":{"A":-1e-7,"p1":-3e4,"p0":70}},
            {"name":"flat","case":"market","params":{"D":0,"lambda":-7.314,"a":36.07,"b":-0.01,"c":0.018}}
        ]}"#;
        let mut registry = Registry::builtin();
        registry.merge(Registry::parse(text, "mem").unwrap());
        assert_eq!(registry.presets.len(), 4);
        let logistic = registry.get("logistic").unwrap();
        assert_eq!(logistic.source, "user");
        assert_eq!(logistic.params["p0"], 70.0);
        assert!(registry.get("flat").is_ok());
    }

    #[test]
    fn bad_registries_are_rejected() {
        let wrong_version = r#"{"version":2,"presets":[]}"#;
        assert!(matches!(Registry::parse(wrong_version, "mem"), Err(CliError::Usage(_))));
        let missing_param = r#"{"version":1,"presets":[{"name":"x","case":"logistic","params":{"A":1}}]}"#;
        assert!(matches!(Registry::parse(missing_param, "mem"), Err(CliError::Usage(_))));
        assert!(matches!(Registry::parse("{", "mem"), Err(CliError::Parse { .. })));
    }

    #[test]
    fn overrides() {
        assert_eq!(parse_override("p0=80").unwrap(), ("p0".to_string(), 80.0));
        assert_eq!(parse_override(" D = 0 ").unwrap(), ("D".to_string(), 0.0));
        assert!(parse_override("p0").is_err());
        assert!(parse_override("p0=x").is_err());
        assert!(parse_override("p0=inf").is_err());
    }
}
