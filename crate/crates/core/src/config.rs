//! JSON configuration shared by the CLI and the HTTP service.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::audio::DEFAULT_SAMPLE_RATE;
use crate::mapping::MappingConfig;
use crate::spatial::SpatialConfig;
use crate::SonifyError;

pub const CONFIG_ENV: &str = "SONIFY_CONFIG";

fn default_bind_addr() -> String {
    "127.0.0.1:8080".into()
}

fn default_ttl() -> f64 {
    600.0
}

fn default_sample_rate() -> u32 {
    DEFAULT_SAMPLE_RATE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub crime_csv: Option<PathBuf>,
    #[serde(default)]
    pub growth_csv: Option<PathBuf>,
    #[serde(default)]
    pub sample_bank_dir: Option<PathBuf>,
    #[serde(default)]
    pub mapping: MappingConfig,
    #[serde(default)]
    pub spatial: SpatialConfig,
    #[serde(default = "default_bind_addr")]
    pub bind_addr: String,
    #[serde(default = "default_ttl")]
    pub audio_ttl_s: f64,
    #[serde(default = "default_sample_rate")]
    pub sample_rate_hz: u32,
    /// Directory of built web UI assets served at `/`.
    #[serde(default)]
    pub webui_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            crime_csv: None,
            growth_csv: None,
            sample_bank_dir: None,
            mapping: MappingConfig::default(),
            spatial: SpatialConfig::default(),
            bind_addr: default_bind_addr(),
            audio_ttl_s: default_ttl(),
            sample_rate_hz: default_sample_rate(),
            webui_dir: None,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, SonifyError> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| SonifyError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, SonifyError> {
        let text = std::fs::read_to_string(path).map_err(|source| SonifyError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.crime_csv, &mut cfg.growth_csv, &mut cfg.sample_bank_dir, &mut cfg.webui_dir]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SonifyError> {
        self.mapping.validate()?;
        self.spatial.validate()?;
        if !(self.audio_ttl_s.is_finite() && self.audio_ttl_s >= 0.0) {
            return Err(SonifyError::Config("audio_ttl_s must be >= 0".into()));
        }
        if !(8000..=192_000).contains(&self.sample_rate_hz) {
            return Err(SonifyError::Config("sample_rate_hz must be in 8000..=192000".into()));
        }
        Ok(())
    }

    pub fn crime_csv(&self) -> Result<&Path, SonifyError> {
        self.crime_csv
            .as_deref()
            .ok_or_else(|| SonifyError::Config("missing crime_csv".into()))
    }

    pub fn growth_csv(&self) -> Result<&Path, SonifyError> {
        self.growth_csv
            .as_deref()
            .ok_or_else(|| SonifyError::Config("missing growth_csv".into()))
    }
}
