//! Optional JSON config file supplying defaults for optional flags.
//!
//! Flags always win over the config file; the resolved values are what
//! the run manifest records. No environment variables are consulted.

use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Random seed for bootstrap, Monte-Carlo, and synthesis commands.
    pub seed: Option<u64>,
    /// Confidence level for statistical gates, in (0, 1).
    pub confidence: Option<f64>,
    /// Bootstrap resample count.
    pub resamples: Option<usize>,
    /// Quadrature resolution per axis.
    pub resolution: Option<usize>,
    /// Thin-wire clearance in metres.
    pub clearance_m: Option<f64>,
    /// Monte-Carlo sample count for ratio-test uncertainty cross-checks.
    pub mc_samples: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::usage(format!("cannot read config `{}`: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::usage(format!("bad config `{}`: {e}", path.display()))
        })
    }
}
