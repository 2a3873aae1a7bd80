use std::path::Path;

use serde::{Deserialize, Serialize};

use super::manifest::SelectionCriteria;
use crate::error::{Error, Result};
use crate::pipeline::PipelineConfig;

/// The TOML configuration file. Every key is optional:
///
/// ```toml
/// [select]
/// min_stars = 5
/// max_size_bytes = 314572800
///
/// [pipeline]
/// max_calls = 14
/// vocab_identifier_budget = 9995
/// min_desc_words = 3
/// test_fraction = 0.04
/// split_seed = 0
/// test_word_filter = "test"
/// test_word_match = "token"    # or "substring"
/// keep_duplicates = false
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub select: SelectionCriteria,
    pub pipeline: PipelineConfig,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config> {
        let config: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.pipeline.validate()?;
        Ok(config)
    }
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Config::from_toml(&text)
}
