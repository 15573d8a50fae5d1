use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::NaiveTime;
use serde::Deserialize;

use crate::elicit::BackendConfig;

use super::CliError;

fn default_cache_root() -> PathBuf {
    PathBuf::from(".sentibias-cache")
}

fn default_cutoff() -> String {
    // Tokyo Stock Exchange close.
    "15:00".to_string()
}

fn default_horizons() -> Vec<usize> {
    vec![1, 10, 30, 60]
}

fn default_min_obs() -> usize {
    60
}

fn default_bold_threshold() -> f64 {
    0.2
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default = "default_horizons")]
    pub horizons: Vec<usize>,
    #[serde(default = "default_min_obs")]
    pub min_obs: usize,
    #[serde(default)]
    pub scan_past_invalid: bool,
    #[serde(default)]
    pub fail_fast: bool,
    /// Spreads at or above this magnitude are highlighted in rendered tables.
    #[serde(default = "default_bold_threshold")]
    pub bold_threshold: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            horizons: default_horizons(),
            min_obs: default_min_obs(),
            scan_past_invalid: false,
            fail_fast: false,
            bold_threshold: default_bold_threshold(),
        }
    }
}

/// Top-level run configuration (TOML). API keys are referenced by
/// environment-variable name only and never stored here.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_cache_root")]
    pub cache_root: PathBuf,
    /// Optional JSON file overriding the built-in prompt templates.
    #[serde(default)]
    pub templates: Option<PathBuf>,
    /// Market-close cutoff (HH:MM) deciding whether an announcement maps to
    /// the same or the next trading day.
    #[serde(default = "default_cutoff")]
    pub cutoff: String,
    #[serde(default)]
    pub backends: BTreeMap<String, BackendConfig>,
    #[serde(default)]
    pub analysis: AnalysisConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            cache_root: default_cache_root(),
            templates: None,
            cutoff: default_cutoff(),
            backends: BTreeMap::new(),
            analysis: AnalysisConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let content = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig = toml::from_str(&content)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.cutoff_time()?;
        if !self.analysis.horizons.windows(2).all(|w| w[0] < w[1]) {
            return Err(CliError::Usage(
                "analysis.horizons must be strictly ascending".into(),
            ));
        }
        if self.analysis.horizons.is_empty() {
            return Err(CliError::Usage("analysis.horizons must be non-empty".into()));
        }
        Ok(())
    }

    pub fn cutoff_time(&self) -> Result<NaiveTime, CliError> {
        NaiveTime::parse_from_str(&self.cutoff, "%H:%M")
            .or_else(|_| NaiveTime::parse_from_str(&self.cutoff, "%H:%M:%S"))
            .map_err(|e| CliError::Usage(format!("bad cutoff time {:?}: {e}", self.cutoff)))
    }
}
