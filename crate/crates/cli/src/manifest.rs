use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Record of a run: what configuration and inputs produced which outputs.
/// Contains no timestamps, so identical runs give identical bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config_sha256: String,
    /// input path as configured -> content digest
    pub inputs: BTreeMap<String, String>,
    /// stage -> output file -> content digest
    pub stages: BTreeMap<String, BTreeMap<String, String>>,
}

impl RunManifest {
    pub fn new(config_sha256: String) -> Self {
        RunManifest {
            tool: "mathex".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_sha256,
            inputs: BTreeMap::new(),
            stages: BTreeMap::new(),
        }
    }

    /// The manifest in `dir` when it was written for the same config,
    /// otherwise a fresh one.
    pub fn open(dir: &Path, config_sha256: &str) -> CliResult<Self> {
        let path = dir.join(MANIFEST_FILE);
        if let Ok(text) = std::fs::read_to_string(&path) {
            match serde_json::from_str::<RunManifest>(&text) {
                Ok(m) if m.config_sha256 == config_sha256 && m.version == env!("CARGO_PKG_VERSION") => return Ok(m),
                Ok(_) => log::info!("{} was written for another config; starting afresh", path.display()),
                Err(e) => log::warn!("ignoring unreadable {}: {e}", path.display()),
            }
        }
        Ok(RunManifest::new(config_sha256.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, dir: &Path) -> CliResult<()> {
        let path = dir.join(MANIFEST_FILE);
        std::fs::write(&path, self.to_json()).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
    }
}
