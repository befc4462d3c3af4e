//! Experiment configuration files.

use std::path::Path;

use anyhow::{bail, Context};
use gen_pde::basis::{BasisFamily, FeedMode};
use gen_pde::domain::DomainBox;
use gen_pde::model::{GenModel, Model, PinnModel};
use gen_pde::pde::{PdeProblem, ProblemId};
use gen_pde::training::TrainConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Gen,
    Pinn,
    Exact,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub family: BasisFamily,
    pub count_m: usize,
    #[serde(default)]
    pub count_n: usize,
    #[serde(default)]
    pub feed: FeedMode,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub nt: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { nx: 101, nt: 101 }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

/// One experiment: problem, model, training settings, output grids.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemId,
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisConfig>,
    /// Hidden-layer widths of the baseline MLP.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pinn_hidden: Option<Vec<usize>>,
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default)]
    pub grid: GridConfig,
    /// Extrapolation box override; defaults to the problem's.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extrapolation: Option<BoxConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        match self.model {
            ModelKind::Gen => {
                let basis = self
                    .basis
                    .as_ref()
                    .ok_or_else(|| anyhow::anyhow!("model \"gen\" requires a \"basis\" section"))?;
                if basis.count_m < 1 {
                    bail!("basis.count_m must be >= 1");
                }
                if basis.family == BasisFamily::GaussHeatProduct && basis.count_n < 1 {
                    bail!("basis.family \"gauss-heat-product\" requires basis.count_n >= 1");
                }
            }
            ModelKind::Pinn => {
                if self.basis.is_some() {
                    bail!("model \"pinn\" does not take a \"basis\" section");
                }
            }
            ModelKind::Exact => {}
        }
        self.train.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
        if let Some(b) = &self.extrapolation {
            DomainBox::new(b.x_lo, b.x_hi, b.t_lo, b.t_hi).map_err(|e| anyhow::anyhow!("{e}"))?;
        }
        Ok(())
    }

    /// The problem with any extrapolation override applied.
    pub fn problem(&self) -> anyhow::Result<PdeProblem> {
        let problem = self.problem.problem();
        match &self.extrapolation {
            Some(b) => {
                let bx = DomainBox::new(b.x_lo, b.x_hi, b.t_lo, b.t_hi)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                problem.with_extrapolation(bx).map_err(|e| anyhow::anyhow!("{e}"))
            }
            None => Ok(problem),
        }
    }

    /// Initialize the model from the seed's default RNG stream.
    pub fn build_model(&self, problem: &PdeProblem) -> anyhow::Result<Model> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.train.seed);
        Ok(match self.model {
            ModelKind::Gen => {
                let b = self.basis.as_ref().expect("validated");
                let mut gen =
                    GenModel::init(b.family, b.count_m, b.count_n, problem.domain, &mut rng)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                if b.feed != FeedMode::default() {
                    gen = gen.with_feed(b.feed, &mut rng);
                }
                Model::Gen(gen)
            }
            ModelKind::Pinn => {
                let hidden = self.pinn_hidden.clone().unwrap_or_else(|| vec![20, 20, 20, 20]);
                Model::Pinn(PinnModel::init(&hidden, &mut rng))
            }
            ModelKind::Exact => Model::Exact { problem: self.problem },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_gen_config() {
        let text = r#"{
            "problem": "heat",
            "model": "gen",
            "basis": { "family": "sine-heat", "count_m": 25 }
        }"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        config.validate().unwrap();
        assert_eq!(config.train.iterations, 20_000);
        assert_eq!(config.grid.nx, 101);
    }

    #[test]
    fn unknown_family_names_the_field() {
        let text = r#"{
            "problem": "heat",
            "model": "gen",
            "basis": { "family": "wavelet", "count_m": 25 }
        }"#;
        let err = serde_json::from_str::<ExperimentConfig>(text).unwrap_err().to_string();
        assert!(err.contains("wavelet"), "{err}");
        assert!(err.contains("sine-heat"), "expected variant list in {err}");
    }

    #[test]
    fn gen_without_basis_is_rejected() {
        let text = r#"{ "problem": "heat", "model": "gen" }"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        let err = config.validate().unwrap_err().to_string();
        assert!(err.contains("basis"), "{err}");
    }
}
