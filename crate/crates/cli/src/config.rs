use std::path::{Path, PathBuf};

use serde::Deserialize;
use stereohedra::stereohedron::MarginalPolicy;

use crate::error::CliError;

/// Settings read from the `--config` JSON file. Command-line flags take
/// precedence; relative paths are resolved against the file's directory.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Worker threads; `STEREO_THREADS` overrides it.
    pub threads: Option<usize>,
    /// Group catalog replacing the built-in one.
    pub catalog: Option<PathBuf>,
    /// Bound table replacing the built-in one.
    pub bounds_table: Option<PathBuf>,
    /// Preset file replacing the built-in one.
    pub presets: Option<PathBuf>,
    /// Default marginal policy for `facets` without a preset.
    pub marginal: Option<MarginalPolicy>,
    /// Radius doublings before enumeration gives up.
    pub max_doublings: Option<u32>,
    /// Sample points per subdomain side for witnessed influence regions.
    pub samples: Option<usize>,
    /// Log filter used when `RUST_LOG` is unset, e.g. "info".
    pub log_level: Option<String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::failure(format!("config {}: {e}", path.display())))?;
        let mut cfg: Config = serde_json::from_str(&text)
            .map_err(|e| CliError::failure(format!("config {}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.catalog, &mut cfg.bounds_table, &mut cfg.presets]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Thread count from `STEREO_THREADS`, falling back to the config.
pub fn thread_count(env: Option<&str>, cfg: &Config) -> Result<Option<usize>, CliError> {
    match env.map(str::trim).filter(|s| !s.is_empty()) {
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::failure(format!(
                "STEREO_THREADS must be a positive integer, got `{s}`"
            ))),
        },
        None => Ok(cfg.threads),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_overrides_config() {
        let cfg = Config {
            threads: Some(3),
            ..Config::default()
        };
        assert_eq!(thread_count(None, &cfg).unwrap(), Some(3));
        assert_eq!(thread_count(Some("2"), &cfg).unwrap(), Some(2));
        assert!(thread_count(Some("0"), &cfg).is_err());
        assert!(thread_count(Some("many"), &cfg).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<Config>(r#"{"threads": 2, "colour": "red"}"#).is_err());
        let cfg: Config = serde_json::from_str(r#"{"marginal": "count-contacts"}"#).unwrap();
        assert_eq!(cfg.marginal, Some(MarginalPolicy::CountContacts));
    }
}
