//! Adam optimizer with bias correction.

use super::config::TrainConfig;
use crate::error::{Error, Result};

/// First/second moment accumulators, shaped like the flat parameter vector.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step_count: usize,
}

impl AdamState {
    pub fn new(n_params: usize) -> Self {
        AdamState { m: vec![0.0; n_params], v: vec![0.0; n_params], step_count: 0 }
    }
}

/// One bias-corrected update of `params` in place.
pub fn adam_step(
    state: &mut AdamState,
    params: &mut [f64],
    grads: &[f64],
    config: &TrainConfig,
) -> Result<()> {
    if params.len() != state.m.len() || grads.len() != params.len() {
        return Err(Error::ShapeMismatch { expected: state.m.len(), got: params.len() });
    }
    if let Some(i) = grads.iter().position(|g| !g.is_finite()) {
        return Err(Error::Numerical(format!(
            "non-finite gradient component {} at parameter {i}",
            grads[i]
        )));
    }
    state.step_count += 1;
    let t = state.step_count as i32;
    let bc1 = 1.0 - config.beta1.powi(t);
    let bc2 = 1.0 - config.beta2.powi(t);
    for i in 0..params.len() {
        let g = grads[i];
        state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
        state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
        let m_hat = state.m[i] / bc1;
        let v_hat = state.v[i] / bc2;
        params[i] -= config.lr * m_hat / (v_hat.sqrt() + config.adam_eps);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> TrainConfig {
        TrainConfig::default()
    }

    #[test]
    fn zero_gradient_decays_moments() {
        let mut state = AdamState::new(3);
        state.m = vec![0.5, -0.2, 0.1];
        state.v = vec![0.3, 0.4, 0.5];
        let before_m = state.m.clone();
        let before_v = state.v.clone();
        let mut params = [1.0, 2.0, 3.0];
        adam_step(&mut state, &mut params, &[0.0; 3], &cfg()).unwrap();
        for ((after, before), (va, vb)) in state
            .m
            .iter()
            .zip(before_m.iter())
            .zip(state.v.iter().zip(before_v.iter()))
        {
            assert_eq!(*after, before * cfg().beta1);
            assert_eq!(*va, vb * cfg().beta2);
        }
    }

    #[test]
    fn zero_gradient_from_rest_is_identity() {
        let mut state = AdamState::new(2);
        let mut params = [1.0, -4.0];
        adam_step(&mut state, &mut params, &[0.0, 0.0], &cfg()).unwrap();
        assert_eq!(params, [1.0, -4.0]);
        assert_eq!(state.step_count, 1);
    }

    #[test]
    fn first_step_magnitude_is_learning_rate() {
        // bias-corrected first step: lr * g / (|g| + eps), independent of |g|
        // up to the eps rounding (which matters only for |g| near eps)
        for g in [1e-6, 1e-3, 1.0, 1e4] {
            let mut state = AdamState::new(1);
            let mut params = [0.0];
            adam_step(&mut state, &mut params, &[g], &cfg()).unwrap();
            let step = params[0].abs();
            let eps_rounding = cfg().adam_eps / g;
            assert!(
                (step - cfg().lr).abs() <= cfg().lr * (2.0 * eps_rounding + 1e-12),
                "g = {g}: step {step}"
            );
        }
    }

    #[test]
    fn deterministic_trajectories() {
        let run = || {
            let mut state = AdamState::new(2);
            let mut params = [0.3, -0.8];
            for i in 0..50 {
                let g = [params[0] * 0.1 + i as f64 * 1e-3, params[1].sin()];
                adam_step(&mut state, &mut params, &g, &cfg()).unwrap();
            }
            params
        };
        let a = run();
        let b = run();
        assert_eq!(a[0].to_bits(), b[0].to_bits());
        assert_eq!(a[1].to_bits(), b[1].to_bits());
    }

    #[test]
    fn non_finite_gradient_is_an_error() {
        let mut state = AdamState::new(1);
        let mut params = [0.0];
        assert!(adam_step(&mut state, &mut params, &[f64::NAN], &cfg()).is_err());
    }
}
