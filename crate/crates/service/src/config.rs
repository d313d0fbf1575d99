use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use wsmatch_core::lexicon::{Lexicon, LexiconError};
use wsmatch_core::matcher::DEFAULT_THRESHOLD;
use wsmatch_core::similarity::Weights;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration {path}: {source}")]
    Toml {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

/// Settings shared by the CLI and the server. Every field can also be set on
/// the command line, which takes precedence over the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Fixture file or WordNet dictionary directory; the bundled lexicon when unset.
    pub lexicon: Option<PathBuf>,
    pub weights: Weights,
    pub threshold: f64,
    pub data_dir: PathBuf,
    pub port: u16,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            lexicon: None,
            weights: Weights::default(),
            threshold: DEFAULT_THRESHOLD,
            data_dir: PathBuf::from("wsmatch-data"),
            port: 8080,
        }
    }
}

impl Config {
    /// Reads a file without validating it, so that flags can still fix values.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| ConfigError::Toml {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.weights
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        wsmatch_core::matcher::check_threshold(self.threshold).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn load_lexicon(&self) -> Result<Lexicon, ConfigError> {
        match &self.lexicon {
            Some(path) => Ok(Lexicon::load(path)?),
            None => Ok(Lexicon::builtin()),
        }
    }
}
