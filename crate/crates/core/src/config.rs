//! Run-time configuration with layered precedence:
//! environment (`THUE_*`) < config file (`key = value` lines) < CLI flags.

use crate::error::Error;
use crate::Result;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Starting interval precision in bits (escalates automatically).
    pub precision_floor: u32,
    /// Directory for continued-fraction cache files; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
    /// Emit JSON instead of human-readable text.
    pub json: bool,
    /// Rayon thread count; 0 means "let rayon decide".
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_floor: 128,
            cache_dir: None,
            json: false,
            threads: 0,
        }
    }
}

/// Optional overrides from one configuration layer.
#[derive(Debug, Clone, Default)]
pub struct ConfigLayer {
    pub precision_floor: Option<u32>,
    pub cache_dir: Option<PathBuf>,
    pub json: Option<bool>,
    pub threads: Option<usize>,
}

impl ConfigLayer {
    pub fn from_env() -> Result<Self> {
        let mut layer = ConfigLayer::default();
        if let Ok(v) = std::env::var("THUE_PRECISION_FLOOR") {
            layer.precision_floor =
                Some(v.parse().map_err(|_| Error::config("THUE_PRECISION_FLOOR"))?);
        }
        if let Ok(v) = std::env::var("THUE_CACHE_DIR") {
            layer.cache_dir = Some(PathBuf::from(v));
        }
        if let Ok(v) = std::env::var("THUE_JSON") {
            layer.json = Some(parse_bool(&v).ok_or_else(|| Error::config("THUE_JSON"))?);
        }
        if let Ok(v) = std::env::var("THUE_THREADS") {
            layer.threads = Some(v.parse().map_err(|_| Error::config("THUE_THREADS"))?);
        }
        Ok(layer)
    }

    /// Parse a `key = value` config file; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut layer = ConfigLayer::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("{}:{}: expected key = value", path.display(), lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || Error::config(format!("{}:{}: bad value for {}", path.display(), lineno + 1, key));
            match key {
                "precision_floor" => layer.precision_floor = Some(value.parse().map_err(|_| bad())?),
                "cache_dir" => layer.cache_dir = Some(PathBuf::from(value)),
                "json" => layer.json = Some(parse_bool(value).ok_or_else(bad)?),
                "threads" => layer.threads = Some(value.parse().map_err(|_| bad())?),
                other => {
                    return Err(Error::config(format!(
                        "{}:{}: unknown key {}",
                        path.display(),
                        lineno + 1,
                        other
                    )))
                }
            }
        }
        Ok(layer)
    }

    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = self.precision_floor {
            cfg.precision_floor = v;
        }
        if let Some(v) = &self.cache_dir {
            cfg.cache_dir = Some(v.clone());
        }
        if let Some(v) = self.json {
            cfg.json = v;
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Some(true),
        "0" | "false" | "no" | "off" => Some(false),
        _ => None,
    }
}

/// Resolve the effective configuration from env, then file, then CLI.
pub fn resolve(file: Option<&Path>, cli: &ConfigLayer) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    ConfigLayer::from_env()?.apply(&mut cfg);
    if let Some(path) = file {
        ConfigLayer::from_file(path)?.apply(&mut cfg);
    }
    cli.apply(&mut cfg);
    if cfg.precision_floor < 32 {
        return Err(Error::config("precision_floor must be at least 32 bits"));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn precedence_file_over_default_cli_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("thue.conf");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "precision_floor = 256  # comment").unwrap();
        writeln!(f, "json = yes").unwrap();
        drop(f);

        let cli = ConfigLayer {
            json: Some(false),
            ..Default::default()
        };
        let cfg = resolve(Some(&path), &cli).unwrap();
        assert_eq!(cfg.precision_floor, 256);
        assert!(!cfg.json); // CLI wins over file
    }

    #[test]
    fn bad_key_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("thue.conf");
        std::fs::write(&path, "precison = 5\n").unwrap();
        assert!(resolve(Some(&path), &ConfigLayer::default()).is_err());
    }
}
