use super::pipeline::PipelineOptions;
use super::scenario::ScenarioKind;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Run description read from TOML, for example
///
/// ```toml
/// scenario = "circle"
/// eps = [0.4, 0.2, 0.1]
/// seed = 42
/// out_dir = "out/circle"
///
/// [pipeline]
/// grid = "graded"
/// samples_per_cell = 2000
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub pipeline: PipelineOptions,
}

fn default_eps() -> Vec<f64> {
    vec![0.4, 0.2, 0.1]
}

fn default_seed() -> u64 {
    42
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(e) = self.eps.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return Err(Error::Invalid(format!("config: eps {e} outside (0, 1)")));
        }
        if self.seed > i64::MAX as u64 {
            return Err(Error::Invalid(format!("config: seed {} does not fit a TOML integer", self.seed)));
        }
        if self.pipeline.samples_per_cell.is_some_and(|s| s < 500) {
            return Err(Error::Invalid("config: samples_per_cell below 500".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        self.validate()?;
        toml::to_string(self).map_err(|e| Error::Invalid(format!("config: {e}")))
    }
}
