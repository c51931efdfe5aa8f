use crate::error::{CliError, CliResult};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

/// Record of one command invocation, enough to repeat it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Subcommand path, e.g. `fit fuzzy`.
    pub command: String,
    pub inputs: Vec<String>,
    pub seed: u64,
    /// Every parameter value the run used, defaults included.
    pub overrides: BTreeMap<String, String>,
    pub version: String,
    /// Lowercase hex SHA-256 of the primary output.
    pub output_digest: String,
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        RunManifest {
            command: command.into(),
            inputs: Vec::new(),
            seed: 0,
            overrides: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            output_digest: String::new(),
        }
    }

    pub fn input(mut self, path: impl Into<String>) -> Self {
        self.inputs.push(path.into());
        self
    }

    pub fn set(mut self, key: &str, value: impl ToString) -> Self {
        self.overrides.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn digest_of(mut self, output: &[u8]) -> Self {
        self.output_digest = sha256_hex(output);
        self
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::internal(e.to_string()))?;
        fs::write(path, text + "\n").map_err(|e| CliError::internal(format!("{}: {e}", path.display())))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
