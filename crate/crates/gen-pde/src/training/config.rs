//! Training configuration.

use crate::error::{Error, Result};

/// How collocation points are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    UniformRandom,
    Grid,
    #[default]
    LatinHypercube,
}

/// Optimization and sampling settings.
///
/// Defaults are desk scale: 20000 iterations instead of the 100000 used for
/// full runs (see [`TrainConfig::paper_scale`]); everything else matches the
/// reference setup (Adam at `lr = 1e-3`, `beta = (0.9, 0.999)`, unit loss
/// weights, a fixed Latin-hypercube collocation set).
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub iterations: usize,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub adam_eps: f64,
    /// Weight of the boundary mean-square term.
    pub lambda_bc: f64,
    /// Weight of the initial-condition mean-square term.
    pub gamma_ic: f64,
    pub n_interior: usize,
    pub n_boundary: usize,
    pub n_initial: usize,
    pub sampling: Sampling,
    /// Redraw the collocation sets every this many iterations; 0 keeps the
    /// initial sets for the whole run.
    pub resample_every: usize,
    pub seed: u64,
    /// Progress callback interval in iterations; 0 disables.
    pub progress_every: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            iterations: 20_000,
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            adam_eps: 1e-8,
            lambda_bc: 1.0,
            gamma_ic: 1.0,
            n_interior: 2000,
            n_boundary: 200,
            n_initial: 200,
            sampling: Sampling::default(),
            resample_every: 0,
            seed: 7,
            progress_every: 1000,
        }
    }
}

impl TrainConfig {
    /// The full-scale iteration budget.
    pub fn paper_scale(mut self) -> Self {
        self.iterations = 100_000;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_interior < 1 || self.n_boundary < 1 || self.n_initial < 1 {
            return Err(Error::Config("collocation counts must be >= 1".into()));
        }
        if !(self.lr > 0.0) {
            return Err(Error::Config(format!("lr must be positive, got {}", self.lr)));
        }
        for (name, beta) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(beta > 0.0 && beta < 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1), got {beta}")));
            }
        }
        Ok(())
    }
}
