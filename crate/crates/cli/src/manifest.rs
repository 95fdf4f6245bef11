use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::Command;
use crate::error::{CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything that determines an experiment's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub plot: bool,
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    /// SHA-256 of the canonical JSON of `config`.
    pub id: String,
    pub config: serde_json::Value,
    pub created_at: String,
    pub tool_version: String,
    pub outputs: Vec<String>,
}

impl ExperimentManifest {
    pub fn new(config: &RunConfig, outputs: Vec<String>) -> CliResult<Self> {
        let config = serde_json::to_value(config)?;
        // serde_json maps are ordered by key, so this is canonical
        let canonical = serde_json::to_string(&config)?;
        Ok(Self {
            id: hex::encode(Sha256::digest(canonical.as_bytes())),
            config,
            created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs,
        })
    }

    pub fn run_config(&self) -> CliResult<RunConfig> {
        Ok(serde_json::from_value(self.config.clone())?)
    }

    pub fn write(&self, dir: &Path) -> CliResult<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
