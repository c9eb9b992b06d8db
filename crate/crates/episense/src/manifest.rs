//! Run manifests written next to command outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::formats::write_text;

pub const TOOL_VERSION: &str = concat!("episense ", env!("CARGO_PKG_VERSION"));

/// Inputs are keyed by the path as given on the command line. No timestamps,
/// so identical runs produce identical manifests.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config: BTreeMap<String, String>,
    /// Where each config value came from: `flag`, `config` or `default`.
    pub config_sources: BTreeMap<String, String>,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            config: BTreeMap::new(),
            config_sources: BTreeMap::new(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.inputs
            .insert(path.display().to_string(), format!("sha256:{}", sha256_hex(&bytes)));
        Ok(())
    }

    /// Writes `contents` to `path` and records it as an output.
    pub fn write_output(&mut self, path: &Path, contents: &str) -> Result<()> {
        write_text(path, contents)?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    /// Writes the manifest beside `primary` as `<primary>.manifest.json`.
    pub fn write_beside(&self, primary: &Path) -> Result<PathBuf> {
        let mut name = primary.as_os_str().to_owned();
        name.push(".manifest.json");
        let path = PathBuf::from(name);
        write_text(&path, &self.to_json())?;
        Ok(path)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
