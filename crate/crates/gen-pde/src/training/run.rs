//! The training loop.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::adam::{adam_step, AdamState};
use super::config::TrainConfig;
use super::loss::{loss_and_grad, LossTerms};
use super::sample::{sample_collocation, CollocationSet};
use crate::autodiff::ParamVector;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::pde::PdeProblem;

/// Losses above this abort the run instead of burning the remaining budget.
pub const DIVERGENCE_GUARD: f64 = 1e6;

/// RNG stream used for collocation sampling (model initialization uses the
/// default stream of the same seed).
pub const SAMPLING_STREAM: u64 = 1;

/// Everything a finished run reports.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TrainReport {
    /// Per-iteration loss terms; length equals the iteration count.
    pub history: Vec<LossTerms>,
    pub wall_clock: Duration,
    pub final_params: ParamVector,
    pub config: TrainConfig,
    /// Exp-overflow clamps observed across the run.
    pub exp_clamp_events: usize,
    /// Sampling-stream word position after the run, split (hi, lo).
    pub sampler_word_pos: (u64, u64),
}

/// Train with a progress sink called every `config.progress_every`
/// iterations (and on the final one). On numerical failure the error
/// propagates; the sink has already seen the partial history.
pub fn train_with_progress(
    model: &Model,
    problem: &PdeProblem,
    config: &TrainConfig,
    mut progress: impl FnMut(usize, &LossTerms),
) -> Result<(Model, TrainReport)> {
    config.validate()?;
    if !model.is_trainable() {
        return Err(Error::Config("model has no trainable parameters".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(SAMPLING_STREAM);
    let mut points: CollocationSet = sample_collocation(problem, config, &mut rng);

    let shape = model.shape();
    let mut params = model.flatten();
    let mut adam = AdamState::new(params.len());
    let mut grad = vec![0.0; params.len()];
    let mut history = Vec::with_capacity(config.iterations);
    let mut exp_clamp_events = 0;
    let start = Instant::now();

    for iteration in 0..config.iterations {
        if config.resample_every > 0 && iteration > 0 && iteration % config.resample_every == 0 {
            points = sample_collocation(problem, config, &mut rng);
        }
        let (terms, stats) = loss_and_grad(
            &shape,
            params.as_slice(),
            problem,
            &points,
            config.lambda_bc,
            config.gamma_ic,
            &mut grad,
        )?;
        exp_clamp_events += stats.exp_clamps;
        history.push(terms);
        if config.progress_every > 0
            && (iteration % config.progress_every == 0 || iteration + 1 == config.iterations)
        {
            progress(iteration, &terms);
        }
        if !terms.total.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite loss at iteration {iteration}"
            )));
        }
        if terms.total > DIVERGENCE_GUARD {
            return Err(Error::Diverged {
                iteration,
                loss: terms.total,
                guard: DIVERGENCE_GUARD,
            });
        }
        adam_step(&mut adam, params.as_mut_slice(), &grad, config)?;
    }

    let trained = model.unflatten(&params)?;
    let pos = rng.get_word_pos();
    let report = TrainReport {
        history,
        wall_clock: start.elapsed(),
        final_params: params,
        config: config.clone(),
        exp_clamp_events,
        sampler_word_pos: ((pos >> 64) as u64, pos as u64),
    };
    Ok((trained, report))
}

/// Train silently; see [`train_with_progress`].
pub fn train(
    model: &Model,
    problem: &PdeProblem,
    config: &TrainConfig,
) -> Result<(Model, TrainReport)> {
    train_with_progress(model, problem, config, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisFamily;
    use crate::domain::DomainBox;
    use crate::model::GenModel;
    use crate::pde::heat_problem;

    fn tiny_config(iterations: usize) -> TrainConfig {
        TrainConfig {
            iterations,
            n_interior: 64,
            n_boundary: 16,
            n_initial: 16,
            progress_every: 0,
            ..TrainConfig::default()
        }
    }

    fn small_model(seed: u64) -> Model {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Model::Gen(
            GenModel::init(
                BasisFamily::SineHeat,
                6,
                0,
                DomainBox::new(0.0, 2.0, 0.0, 2.0).unwrap(),
                &mut rng,
            )
            .unwrap(),
        )
    }

    #[test]
    fn zero_iterations_returns_model_unchanged() {
        let problem = heat_problem();
        let model = small_model(7);
        let (trained, report) = train(&model, &problem, &tiny_config(0)).unwrap();
        assert_eq!(model, trained);
        assert!(report.history.is_empty());
    }

    #[test]
    fn short_run_decreases_loss_and_is_reproducible() {
        let problem = heat_problem();
        let model = small_model(7);
        let cfg = tiny_config(300);
        let (trained_a, report_a) = train(&model, &problem, &cfg).unwrap();
        assert_eq!(report_a.history.len(), 300);
        assert!(report_a.history.iter().all(|h| h.total.is_finite()));
        let first = report_a.history.first().unwrap().total;
        let last = report_a.history.last().unwrap().total;
        assert!(last < first, "loss did not decrease: {first} -> {last}");

        let (trained_b, report_b) = train(&model, &problem, &cfg).unwrap();
        assert_eq!(trained_a, trained_b);
        for (a, b) in report_a.history.iter().zip(report_b.history.iter()) {
            assert_eq!(a.total.to_bits(), b.total.to_bits());
        }
    }

    #[test]
    fn exact_model_is_not_trainable() {
        let problem = heat_problem();
        let model = Model::Exact { problem: crate::pde::ProblemId::Heat };
        assert!(train(&model, &problem, &tiny_config(1)).is_err());
    }

    #[test]
    fn progress_callback_sees_history() {
        let problem = heat_problem();
        let model = small_model(3);
        let mut cfg = tiny_config(50);
        cfg.progress_every = 10;
        let mut seen = Vec::new();
        let _ = train_with_progress(&model, &problem, &cfg, |i, t| seen.push((i, t.total)))
            .unwrap();
        assert_eq!(seen.iter().map(|s| s.0).collect::<Vec<_>>(), vec![0, 10, 20, 30, 40, 49]);
    }
}
