//! Versioned model checkpoints.

use std::path::Path;

use anyhow::Context;
use gen_pde::autodiff::{ParamLayout, ParamVector};
use gen_pde::model::Model;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const CHECKPOINT_FORMAT: &str = "gen-pde-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Sampler state at the end of training, enough to reconstruct the stream.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RngState {
    pub seed: u64,
    pub stream: u64,
    pub word_pos_hi: u64,
    pub word_pos_lo: u64,
}

/// Serialized training artifact: config echo, the model with its flat
/// parameters and index map, RNG state and iteration counter.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub experiment: ExperimentConfig,
    pub model: Model,
    pub params: ParamVector,
    pub param_layout: ParamLayout,
    pub rng: RngState,
    pub iteration: usize,
}

/// Raised when a checkpoint file has the wrong format or version tag.
#[derive(Debug, thiserror::Error)]
#[error("incompatible checkpoint: format {format:?} version {version} (expected {CHECKPOINT_FORMAT:?} version {CHECKPOINT_VERSION})")]
pub struct IncompatibleCheckpoint {
    pub format: String,
    pub version: u32,
}

impl Checkpoint {
    pub fn new(
        experiment: ExperimentConfig,
        model: Model,
        rng: RngState,
        iteration: usize,
    ) -> Self {
        let params = model.flatten();
        let param_layout = model.shape().layout();
        Checkpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            experiment,
            model,
            params,
            param_layout,
            rng,
            iteration,
        }
    }

    pub fn save(&self, path: &Path) -> anyhow::Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        crate::atomic_write(path, json.as_bytes())
            .with_context(|| format!("writing checkpoint {}", path.display()))
    }

    /// Load and verify the version tag before touching anything else.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading checkpoint {}", path.display()))?;

        #[derive(Deserialize)]
        struct Header {
            #[serde(default)]
            format: String,
            #[serde(default)]
            version: u32,
        }
        let header: Header = serde_json::from_str(&text)
            .with_context(|| format!("parsing checkpoint header {}", path.display()))?;
        if header.format != CHECKPOINT_FORMAT || header.version != CHECKPOINT_VERSION {
            return Err(IncompatibleCheckpoint {
                format: header.format,
                version: header.version,
            }
            .into());
        }

        let checkpoint: Checkpoint = serde_json::from_str(&text)
            .with_context(|| format!("parsing checkpoint {}", path.display()))?;
        checkpoint
            .model
            .flatten()
            .expect_len(checkpoint.params.len())
            .map_err(|e| anyhow::anyhow!("checkpoint parameter mismatch: {e}"))?;
        Ok(checkpoint)
    }
}
