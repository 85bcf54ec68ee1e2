//! Experiment configuration files.

use std::fs;
use std::path::{Path, PathBuf};

use infocausality::protocol::GameConfig;
use serde::{Deserialize, Serialize};

use crate::emit::Emit;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config has no cells")]
    Empty,
    #[error("cell {index}: {source}")]
    Cell { index: usize, source: infocausality::Error },
}

/// One `(E, n, trials, m)` experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    #[serde(rename = "E", alias = "e")]
    pub e: f64,
    pub n: u32,
    pub trials: u64,
    #[serde(default = "one")]
    pub m: usize,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub cells: Vec<Cell>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Emit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Cell {
    pub fn game_config(&self, seed: u64) -> Result<GameConfig, infocausality::Error> {
        let cfg = GameConfig::isotropic(self.n, self.e, self.trials, seed)?.with_messages(self.m);
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.cells.is_empty() {
            return Err(ConfigError::Empty);
        }
        for (index, cell) in self.cells.iter().enumerate() {
            cell.game_config(0).map_err(|source| ConfigError::Cell { index, source })?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_owned(), source })?;
        Self::parse(&text)
    }
}
