//! Collocation sampling, physics-informed loss assembly, Adam optimization,
//! the training loop, and evaluation/extrapolation metrics.

mod adam;
mod config;
mod eval;
mod loss;
mod run;
mod sample;

pub use adam::{adam_step, AdamState};
pub use config::{Sampling, TrainConfig};
pub use eval::{
    evaluate, extrapolation_report, ExtrapolationReport, GridSpec, Metrics, Profile,
    RegionMetrics, PROFILE_SAMPLES,
};
pub use loss::{compute_loss, loss_and_grad, record_full_loss, LossStats, LossTerms};
pub use run::{train, train_with_progress, TrainReport, DIVERGENCE_GUARD, SAMPLING_STREAM};
pub use sample::{sample_collocation, CollocationSet};
