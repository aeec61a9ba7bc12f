use std::path::Path;

use glspace_core::schema::{BaseDesc, FunctionDesc, SchemaError, SpaceDesc};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::Command;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl ConfigError {
    pub fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<SchemaError> for ConfigError {
    fn from(e: SchemaError) -> Self {
        Self::at(e.path, e.message)
    }
}

/// The document as written, before command parameters are resolved.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Option<String>,
    space: Option<SpaceDesc>,
    function: Option<FunctionDesc>,
    #[serde(default)]
    base: BaseDesc,
    #[serde(default)]
    params: Option<Value>,
    #[serde(default)]
    seed: u64,
}

/// A validated configuration with every default filled in.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub space: Option<SpaceDesc>,
    pub function: Option<FunctionDesc>,
    pub base: BaseDesc,
    pub params: Value,
    pub seed: u64,
}

impl RunConfig {
    pub fn params<T: DeserializeOwned>(&self) -> Result<T, ConfigError> {
        strict(self.params.clone(), "params")
    }

    pub fn space(&self) -> Result<&SpaceDesc, ConfigError> {
        self.space
            .as_ref()
            .ok_or_else(|| ConfigError::at("space", format!("`{}` needs a space", self.command)))
    }

    pub fn function(&self) -> Result<&FunctionDesc, ConfigError> {
        self.function
            .as_ref()
            .ok_or_else(|| ConfigError::at("function", format!("`{}` needs a function", self.command)))
    }
}

/// Deserializes `value` and reports the full key path on failure.
pub fn strict<T: DeserializeOwned>(value: Value, root: &str) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." {
            root.to_string()
        } else {
            format!("{root}.{inner}")
        };
        ConfigError::at(path, e.into_inner().to_string())
    })
}

pub fn load_config(path: &Path, command: Command, seed: Option<u64>) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text, command, seed)
}

/// Parses and validates a config document; `seed` overrides the document's seed.
pub fn parse_config(text: &str, command: Command, seed: Option<u64>) -> Result<RunConfig, ConfigError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::at(if path == "." { "<root>".into() } else { path }, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| ConfigError::at("<root>", e.to_string()))?;

    if let Some(named) = &raw.command {
        if named != command.name() {
            return Err(ConfigError::at(
                "command",
                format!("config names `{named}` but `{}` was invoked", command.name()),
            ));
        }
    }
    if let Some(space) = &raw.space {
        space.build().map_err(|e| ConfigError::from(e.within("space")))?;
    }
    let params = command.resolve_params(raw.params.unwrap_or_else(|| Value::Object(Default::default())))?;
    Ok(RunConfig {
        command: command.name().to_string(),
        space: raw.space,
        function: raw.function,
        base: raw.base,
        params,
        seed: seed.unwrap_or(raw.seed),
    })
}
