//! `gen-pde train`

use std::path::Path;

use gen_pde::training::{train_with_progress, LossTerms, SAMPLING_STREAM};
use serde::Serialize;

use crate::checkpoint::{Checkpoint, RngState};
use crate::config::ExperimentConfig;
use crate::csvio::{self, Field};
use crate::{classify, CliError, CliResult};

#[derive(Serialize)]
struct ReportJson<'a> {
    experiment: &'a ExperimentConfig,
    iterations_run: usize,
    final_loss: Option<&'a LossTerms>,
    min_total_loss: f64,
    exp_clamp_events: usize,
    error: Option<String>,
}

fn write_history(out_dir: &Path, history: &[LossTerms]) -> anyhow::Result<()> {
    csvio::write(
        &out_dir.join("history.csv"),
        &["iteration", "total", "mse_pde", "mse_bc", "mse_ic"],
        history.iter().enumerate().map(|(i, h)| {
            vec![
                Field::I(i as i64),
                Field::F(h.total),
                Field::F(h.pde),
                Field::F(h.bc),
                Field::F(h.ic),
            ]
        }),
    )
}

pub fn run(
    config_path: &Path,
    seed: Option<u64>,
    iters: Option<usize>,
    out_dir: &Path,
) -> CliResult {
    let mut config = ExperimentConfig::load(config_path).map_err(CliError::config)?;
    if let Some(seed) = seed {
        config.train.seed = seed;
    }
    if let Some(iters) = iters {
        config.train.iterations = iters;
    }
    config.validate().map_err(CliError::config)?;

    let problem = config.problem().map_err(CliError::config)?;
    let model = config.build_model(&problem).map_err(CliError::config)?;
    crate::log_line(out_dir, &format!("train start: {} {}", problem.name, model.describe()));

    // mirror the history so a failed run still leaves a partial report
    let mut history: Vec<LossTerms> = Vec::new();
    let mut progress_cfg = config.train.clone();
    if progress_cfg.progress_every == 0 {
        progress_cfg.progress_every = 1000;
    }
    progress_cfg.progress_every = 1; // capture every iteration into the mirror
    let echo_every = config.train.progress_every.max(1);

    let outcome = train_with_progress(&model, &problem, &progress_cfg, |i, terms| {
        history.push(*terms);
        if i % echo_every == 0 {
            eprintln!(
                "iter {i:>7}  loss {:.6e}  (pde {:.3e}, bc {:.3e}, ic {:.3e})",
                terms.total, terms.pde, terms.bc, terms.ic
            );
        }
    });

    match outcome {
        Ok((trained, report)) => {
            let rng = RngState {
                seed: config.train.seed,
                stream: SAMPLING_STREAM,
                word_pos_hi: report.sampler_word_pos.0,
                word_pos_lo: report.sampler_word_pos.1,
            };
            let checkpoint =
                Checkpoint::new(config.clone(), trained, rng, report.history.len());
            checkpoint
                .save(&out_dir.join("checkpoint.json"))
                .map_err(CliError::config)?;
            write_history(out_dir, &report.history).map_err(CliError::config)?;
            let json = ReportJson {
                experiment: &config,
                iterations_run: report.history.len(),
                final_loss: report.history.last(),
                min_total_loss: report
                    .history
                    .iter()
                    .map(|h| h.total)
                    .fold(f64::INFINITY, f64::min),
                exp_clamp_events: report.exp_clamp_events,
                error: None,
            };
            crate::atomic_write(
                &out_dir.join("report.json"),
                serde_json::to_string_pretty(&json)
                    .map_err(|e| CliError::config(e.into()))?
                    .as_bytes(),
            )
            .map_err(CliError::config)?;
            crate::log_line(
                out_dir,
                &format!(
                    "train done in {:.1}s, final loss {:.6e}",
                    report.wall_clock.as_secs_f64(),
                    report.history.last().map(|h| h.total).unwrap_or(f64::NAN)
                ),
            );
            Ok(())
        }
        Err(e) => {
            // partial report, then surface the numerical failure
            let _ = write_history(out_dir, &history);
            let json = ReportJson {
                experiment: &config,
                iterations_run: history.len(),
                final_loss: history.last(),
                min_total_loss: history.iter().map(|h| h.total).fold(f64::INFINITY, f64::min),
                exp_clamp_events: 0,
                error: Some(e.to_string()),
            };
            if let Ok(text) = serde_json::to_string_pretty(&json) {
                let _ = crate::atomic_write(&out_dir.join("report.json"), text.as_bytes());
            }
            crate::log_line(out_dir, &format!("train failed: {e}"));
            Err(classify(e.into()))
        }
    }
}
