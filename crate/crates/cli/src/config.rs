use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};
use crate::range::parse_grid;

/// Parses flat `key = value` text. Blank lines and lines starting with `#`
/// are ignored; a key may appear only once.
pub fn parse_config_text(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected `key = value`, got `{line}`", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(CliError::Config(format!("config line {}: empty key", lineno + 1)));
        }
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Config(format!("config line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(out)
}

/// Renders settings back into the format read by [`parse_config_text`].
pub fn to_config_text(values: &BTreeMap<String, String>) -> String {
    values.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

/// Command settings resolved from defaults, an optional config file and
/// command-line flags, in increasing precedence.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    resolved: BTreeMap<String, String>,
    from_file: BTreeMap<String, String>,
    from_flags: BTreeMap<String, String>,
    config_path: Option<PathBuf>,
}

impl Settings {
    /// `keys` lists every accepted key with its default (`None` for keys
    /// without one); config-file keys outside this list are rejected.
    pub fn resolve(
        keys: &[(&str, Option<&str>)],
        config_path: Option<&Path>,
        flags: Vec<(&str, Option<String>)>,
    ) -> CliResult<Self> {
        let from_file = match config_path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", p.display())))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        for k in from_file.keys() {
            if !keys.iter().any(|(name, _)| name == k) {
                let known: Vec<&str> = keys.iter().map(|(n, _)| *n).collect();
                return Err(CliError::Config(format!(
                    "unknown config key `{k}` (accepted: {})",
                    known.join(", ")
                )));
            }
        }
        debug_assert!(
            flags.iter().all(|(k, _)| keys.iter().any(|(name, _)| name == k)),
            "every flag must map onto a declared key"
        );
        let from_flags: BTreeMap<String, String> = flags
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect();
        let mut resolved = BTreeMap::new();
        for (k, default) in keys {
            if let Some(d) = default {
                resolved.insert(k.to_string(), d.to_string());
            }
        }
        resolved.extend(from_file.clone());
        resolved.extend(from_flags.clone());
        Ok(Self {
            resolved,
            from_file,
            from_flags,
            config_path: config_path.map(Path::to_path_buf),
        })
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.resolved
    }

    pub fn from_file(&self) -> &BTreeMap<String, String> {
        &self.from_file
    }

    pub fn from_flags(&self) -> &BTreeMap<String, String> {
        &self.from_flags
    }

    pub fn config_path(&self) -> Option<&Path> {
        self.config_path.as_deref()
    }

    /// Records a derived value (for example a default that depends on other
    /// settings) so that it appears in the manifest.
    pub fn set(&mut self, key: &str, value: String) {
        self.resolved.insert(key.to_string(), value);
    }

    pub fn has(&self, key: &str) -> bool {
        self.resolved.contains_key(key)
    }

    pub fn str(&self, key: &str) -> CliResult<&str> {
        self.resolved
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CliError::Config(format!("missing required setting `{key}`")))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, what: &str) -> CliResult<T> {
        let s = self.str(key)?;
        s.trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{key}: `{s}` is not {what}")))
    }

    pub fn f64(&self, key: &str) -> CliResult<f64> {
        let v: f64 = self.parsed(key, "a number")?;
        if !v.is_finite() {
            return Err(CliError::Config(format!("{key}: must be finite")));
        }
        Ok(v)
    }

    pub fn usize(&self, key: &str) -> CliResult<usize> {
        self.parsed(key, "a non-negative integer")
    }

    pub fn u64(&self, key: &str) -> CliResult<u64> {
        self.parsed(key, "a non-negative integer")
    }

    pub fn bool(&self, key: &str) -> CliResult<bool> {
        match self.str(key)?.trim().to_ascii_lowercase().as_str() {
            "true" | "1" | "yes" | "on" => Ok(true),
            "false" | "0" | "no" | "off" => Ok(false),
            other => Err(CliError::Config(format!("{key}: `{other}` is not a boolean"))),
        }
    }

    pub fn grid(&self, key: &str) -> CliResult<Vec<f64>> {
        parse_grid(key, self.str(key)?)
    }
}
