use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use serde::Deserialize;
use thiserror::Error;

use crate::ranking::RankConfig;

pub const DEFAULT_TIMEOUT_MS: u64 = 2000;
pub const TIMEOUT_ENV: &str = "SOAS_TIMEOUT_MS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    #[default]
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown output format {other:?} (expected text or json)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{what} {path} does not exist")]
    MissingPath { what: &'static str, path: PathBuf },
    #[error("timeout_ms must be at least 1")]
    InvalidTimeout,
    #[error("invalid {TIMEOUT_ENV} value {0:?}")]
    InvalidTimeoutEnv(String),
    #[error(transparent)]
    Rank(#[from] crate::ranking::RankError),
    #[error("config file {path}: {message}")]
    File { path: PathBuf, message: String },
    #[error(transparent)]
    Lexicon(#[from] crate::rpu::LexiconError),
    #[error(transparent)]
    Catalog(#[from] crate::locator::CatalogError),
    #[error(transparent)]
    Journal(#[from] crate::comm::JournalError),
}

/// Settings for one pipeline. `None` paths fall back to the shipped
/// fixture lexicon and catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub lexicon_path: Option<PathBuf>,
    pub catalog_path: Option<PathBuf>,
    pub timeout_ms: u64,
    pub output_format: OutputFormat,
    pub rank: RankConfig,
    pub journal_path: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            lexicon_path: None,
            catalog_path: None,
            timeout_ms: DEFAULT_TIMEOUT_MS,
            output_format: OutputFormat::Json,
            rank: RankConfig::default(),
            journal_path: None,
        }
    }
}

/// Optional TOML config file. Keys mirror the CLI flags; `[rank]` holds
/// `match_coeff` and `relevance_coeff`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    lexicon: Option<PathBuf>,
    catalog: Option<PathBuf>,
    timeout_ms: Option<u64>,
    format: Option<OutputFormat>,
    journal: Option<PathBuf>,
    rank: Option<RankConfig>,
}

impl PipelineConfig {
    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }

    /// Default timeout, overridden by `SOAS_TIMEOUT_MS` when set.
    pub fn default_timeout_from_env() -> Result<u64, ConfigError> {
        match std::env::var(TIMEOUT_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| ConfigError::InvalidTimeoutEnv(v)),
            Err(_) => Ok(DEFAULT_TIMEOUT_MS),
        }
    }

    /// Merge a TOML config file over `self`.
    pub fn with_file(mut self, path: &Path) -> Result<Self, ConfigError> {
        let file_err = |message: String| ConfigError::File {
            path: path.to_path_buf(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
        let file: ConfigFile = toml::from_str(&text).map_err(|e| file_err(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: PathBuf| if p.is_relative() { base.join(p) } else { p };
        if let Some(p) = file.lexicon {
            self.lexicon_path = Some(resolve(p));
        }
        if let Some(p) = file.catalog {
            self.catalog_path = Some(resolve(p));
        }
        if let Some(p) = file.journal {
            self.journal_path = Some(resolve(p));
        }
        if let Some(t) = file.timeout_ms {
            self.timeout_ms = t;
        }
        if let Some(f) = file.format {
            self.output_format = f;
        }
        if let Some(r) = file.rank {
            self.rank = r;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (what, path) in [("lexicon", &self.lexicon_path), ("catalog", &self.catalog_path)] {
            if let Some(path) = path {
                if !path.exists() {
                    return Err(ConfigError::MissingPath {
                        what,
                        path: path.clone(),
                    });
                }
            }
        }
        if self.timeout_ms < 1 {
            return Err(ConfigError::InvalidTimeout);
        }
        self.rank.validate()?;
        Ok(())
    }
}
