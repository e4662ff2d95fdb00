use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{to_config_text, Settings};
use crate::error::CliResult;
use crate::output::write_json;

/// Provenance record written next to every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    /// RFC 3339; taken from `SOURCE_DATE_EPOCH` when set.
    pub timestamp: String,
    pub seed: u64,
    /// Every setting the command ran with.
    pub config: BTreeMap<String, String>,
    pub config_file_values: BTreeMap<String, String>,
    pub flag_values: BTreeMap<String, String>,
    /// SHA-256 of each input file, keyed by path.
    pub input_hashes: BTreeMap<String, String>,
}

fn timestamp() -> String {
    let fixed = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0));
    fixed
        .unwrap_or_else(chrono::Utc::now)
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new(command: &str, settings: &Settings, seed: u64) -> CliResult<Self> {
        let mut input_hashes = BTreeMap::new();
        if let Some(p) = settings.config_path() {
            input_hashes.insert(p.display().to_string(), sha256_hex(&std::fs::read(p)?));
        }
        Ok(Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
            seed,
            config: settings.resolved().clone(),
            config_file_values: settings.from_file().clone(),
            flag_values: settings.from_flags().clone(),
            input_hashes,
        })
    }

    /// Writes `manifest.json` and `resolved.conf`; the latter can be passed
    /// back through `--config` to repeat the run.
    pub fn write(&self, dir: &Path) -> CliResult<()> {
        write_json(&dir.join("manifest.json"), self)?;
        let mut conf = self.config.clone();
        conf.remove("out");
        std::fs::write(dir.join("resolved.conf"), to_config_text(&conf))?;
        Ok(())
    }
}
