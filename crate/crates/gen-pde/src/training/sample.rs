//! Collocation point sampling.

use rand::seq::SliceRandom;
use rand::Rng;

use super::config::{Sampling, TrainConfig};
use crate::pde::PdeProblem;

/// Nudge keeping jittered samples strictly inside their stratum.
const EDGE: f64 = 1e-9;

/// Sampled training point sets: interior residual points, boundary points
/// with their targets, initial points with their targets.
#[derive(Clone, Debug, PartialEq)]
pub struct CollocationSet {
    pub interior: Vec<(f64, f64)>,
    /// `(x, t, target)`
    pub boundary: Vec<(f64, f64, f64)>,
    /// `(x, target)` at `t = 0`
    pub initial: Vec<(f64, f64)>,
}

fn jitter(rng: &mut impl Rng) -> f64 {
    rng.random_range(0.0..1.0f64).clamp(EDGE, 1.0 - EDGE)
}

/// One-dimensional samples over `(lo, hi)` by strategy. Latin-hypercube in
/// one dimension is stratified jitter; the grid variant uses cell centers.
fn sample_1d(n: usize, lo: f64, hi: f64, sampling: Sampling, rng: &mut impl Rng) -> Vec<f64> {
    let span = hi - lo;
    match sampling {
        Sampling::UniformRandom => (0..n).map(|_| lo + span * jitter(rng)).collect(),
        Sampling::Grid => (0..n).map(|i| lo + span * (i as f64 + 0.5) / n as f64).collect(),
        Sampling::LatinHypercube => (0..n)
            .map(|i| lo + span * (i as f64 + jitter(rng)) / n as f64)
            .collect(),
    }
}

fn sample_interior(problem: &PdeProblem, n: usize, sampling: Sampling, rng: &mut impl Rng) -> Vec<(f64, f64)> {
    let d = problem.domain;
    match sampling {
        Sampling::UniformRandom => (0..n)
            .map(|_| (d.x_lo + d.x_span() * jitter(rng), d.t_lo + d.t_span() * jitter(rng)))
            .collect(),
        Sampling::Grid => {
            let k = (n as f64).sqrt().ceil() as usize;
            let mut pts = Vec::with_capacity(n);
            'outer: for i in 0..k {
                for j in 0..k {
                    if pts.len() == n {
                        break 'outer;
                    }
                    pts.push((
                        d.x_lo + d.x_span() * (i as f64 + 0.5) / k as f64,
                        d.t_lo + d.t_span() * (j as f64 + 0.5) / k as f64,
                    ));
                }
            }
            pts
        }
        Sampling::LatinHypercube => {
            let mut strata_x: Vec<usize> = (0..n).collect();
            let mut strata_t: Vec<usize> = (0..n).collect();
            strata_x.shuffle(rng);
            strata_t.shuffle(rng);
            (0..n)
                .map(|i| {
                    let x = d.x_lo + d.x_span() * (strata_x[i] as f64 + jitter(rng)) / n as f64;
                    let t = d.t_lo + d.t_span() * (strata_t[i] as f64 + jitter(rng)) / n as f64;
                    (x, t)
                })
                .collect()
        }
    }
}

/// Draw the three collocation sets for a problem. Interior points land
/// strictly inside the domain box; boundary points sit exactly on the two
/// spatial edges (alternating sides); initial points sit at `t = 0`.
/// Deterministic under a fixed seed.
pub fn sample_collocation(
    problem: &PdeProblem,
    config: &TrainConfig,
    rng: &mut impl Rng,
) -> CollocationSet {
    let d = problem.domain;
    let interior = sample_interior(problem, config.n_interior, config.sampling, rng);

    let times = sample_1d(config.n_boundary, d.t_lo, d.t_hi, config.sampling, rng);
    let boundary = times
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let cond = &problem.bc[i % problem.bc.len()];
            let x = problem.boundary_x(cond.locus);
            (x, t, (cond.target)(x, t))
        })
        .collect();

    let xs = sample_1d(config.n_initial, d.x_lo, d.x_hi, config.sampling, rng);
    let initial = xs.into_iter().map(|x| (x, (problem.ic)(x))).collect();

    CollocationSet { interior, boundary, initial }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::heat_problem;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn config(n: usize, sampling: Sampling) -> TrainConfig {
        TrainConfig {
            n_interior: n,
            n_boundary: n.min(50),
            n_initial: n.min(50),
            sampling,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn interior_points_inside_open_box() {
        let problem = heat_problem();
        for sampling in [Sampling::UniformRandom, Sampling::Grid, Sampling::LatinHypercube] {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let set = sample_collocation(&problem, &config(100, sampling), &mut rng);
            assert_eq!(set.interior.len(), 100);
            for &(x, t) in &set.interior {
                assert!(x > 0.0 && x < 2.0 && t > 0.0 && t < 2.0, "({x}, {t}) not interior");
            }
        }
    }

    #[test]
    fn boundary_points_on_loci() {
        let problem = heat_problem();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let set = sample_collocation(&problem, &config(100, Sampling::LatinHypercube), &mut rng);
        for &(x, t, target) in &set.boundary {
            assert!(x == 0.0 || x == 2.0);
            assert!((0.0..=2.0).contains(&t));
            assert_eq!(target, 0.0);
        }
        let lo = set.boundary.iter().filter(|p| p.0 == 0.0).count();
        let hi = set.boundary.len() - lo;
        assert_eq!(lo, hi);
    }

    #[test]
    fn same_seed_identical_sets() {
        let problem = heat_problem();
        let cfg = config(200, Sampling::LatinHypercube);
        let a = sample_collocation(&problem, &cfg, &mut ChaCha8Rng::seed_from_u64(9));
        let b = sample_collocation(&problem, &cfg, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn latin_hypercube_stratifies_each_axis() {
        let problem = heat_problem();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 64;
        let set = sample_collocation(&problem, &config(n, Sampling::LatinHypercube), &mut rng);
        for dim in 0..2 {
            let mut seen = vec![false; n];
            for &(x, t) in &set.interior {
                let c = if dim == 0 { x / 2.0 } else { t / 2.0 };
                let stratum = ((c * n as f64) as usize).min(n - 1);
                assert!(!seen[stratum], "dim {dim} stratum {stratum} hit twice");
                seen[stratum] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }
}
