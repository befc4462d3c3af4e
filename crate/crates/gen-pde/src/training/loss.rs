//! Physics-informed loss assembly and its gradient.
//!
//! The loss is `mean(residual^2)` over interior points plus
//! `lambda * mean((u - u_bc)^2)` over boundary points plus
//! `gamma * mean((u - u_0)^2)` over initial points, each mean over its own
//! set.
//!
//! Two drivers share the per-point recording code: [`compute_loss`] records
//! the whole batch on one caller-visible tape and returns the scalar loss
//! node (used by gradient checks and tests), while [`loss_and_grad`] is the
//! training path — it shards points into fixed-size chunks, records each
//! point on a small rewinding tape, and reduces per-chunk gradients in chunk
//! order. Fixed chunk boundaries plus ordered reduction make the result
//! bit-identical for any thread count.

use rayon::prelude::*;

use super::sample::CollocationSet;
use crate::autodiff::{Jet2, JetCtx, JetField, Tape, TapeCtx, Var};
use crate::error::{Error, Result};
use crate::model::{ModelShape, Scratch};
use crate::pde::PdeProblem;

/// Points per work chunk. Part of the deterministic reduction contract: the
/// gradient is summed chunk by chunk in index order.
const CHUNK: usize = 128;

/// Loss value split into its three terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LossTerms {
    pub total: f64,
    pub pde: f64,
    pub bc: f64,
    pub ic: f64,
}

#[derive(Clone, Copy)]
enum PointKind {
    Interior,
    Boundary,
    Initial,
}

/// Record one point's squared term; returns the squared-term node.
fn record_point_term(
    tape: &mut Tape,
    vars: &[Var],
    shape: &ModelShape,
    problem: &PdeProblem,
    kind: PointKind,
    x: f64,
    t: f64,
    target: f64,
    scratch: &mut Scratch<Var>,
) -> Result<Var> {
    let mut ctx = TapeCtx::new(tape, vars);
    let u = shape.forward(&mut ctx, x, t, scratch);
    let sq = match kind {
        PointKind::Interior => {
            let r = problem.residual.apply(&mut ctx, u, x, t);
            ctx.mul(r, r)
        }
        PointKind::Boundary | PointKind::Initial => {
            let uv = ctx.field(u, JetField::Val);
            let d = ctx.add_const(uv, -target);
            ctx.mul(d, d)
        }
    };
    let value = tape.value(sq).v;
    if !value.is_finite() {
        let what = match kind {
            PointKind::Interior => "pde residual term",
            PointKind::Boundary => "boundary term",
            PointKind::Initial => "initial term",
        };
        return Err(Error::NonFinite { what: what.into(), x, t });
    }
    Ok(sq)
}

/// Record the full batch loss on `tape` (parameter leaves already
/// allocated). Returns the scalar loss node and the three term means.
pub fn record_full_loss(
    tape: &mut Tape,
    vars: &[Var],
    shape: &ModelShape,
    problem: &PdeProblem,
    points: &CollocationSet,
    lambda_bc: f64,
    gamma_ic: f64,
) -> Result<(Var, LossTerms)> {
    let mut scratch = Scratch::default();
    let sum_term = |tape: &mut Tape,
                        kind: PointKind,
                        scratch: &mut Scratch<Var>|
     -> Result<Option<Var>> {
        let mut acc: Option<Var> = None;
        let n = match kind {
            PointKind::Interior => points.interior.len(),
            PointKind::Boundary => points.boundary.len(),
            PointKind::Initial => points.initial.len(),
        };
        for i in 0..n {
            let (x, t, target) = match kind {
                PointKind::Interior => {
                    let (x, t) = points.interior[i];
                    (x, t, 0.0)
                }
                PointKind::Boundary => points.boundary[i],
                PointKind::Initial => {
                    let (x, target) = points.initial[i];
                    (x, 0.0, target)
                }
            };
            let sq = record_point_term(tape, vars, shape, problem, kind, x, t, target, scratch)?;
            acc = Some(match acc {
                Some(a) => tape.add(a, sq),
                None => sq,
            });
        }
        Ok(acc)
    };

    let pde_sum = sum_term(tape, PointKind::Interior, &mut scratch)?;
    let bc_sum = sum_term(tape, PointKind::Boundary, &mut scratch)?;
    let ic_sum = sum_term(tape, PointKind::Initial, &mut scratch)?;

    let mut total: Option<Var> = None;
    let mut terms = LossTerms::default();
    let mut fold = |tape: &mut Tape, sum: Option<Var>, n: usize, weight: f64, slot: &mut f64| {
        if let Some(s) = sum {
            let mean = tape.scale(s, 1.0 / n as f64);
            *slot = tape.value(mean).v;
            let weighted = if weight == 1.0 { mean } else { tape.scale(mean, weight) };
            total = Some(match total {
                Some(t) => tape.add(t, weighted),
                None => weighted,
            });
        }
    };
    fold(tape, pde_sum, points.interior.len(), 1.0, &mut terms.pde);
    fold(tape, bc_sum, points.boundary.len(), lambda_bc, &mut terms.bc);
    fold(tape, ic_sum, points.initial.len(), gamma_ic, &mut terms.ic);

    let total = total.ok_or_else(|| Error::Config("empty collocation set".into()))?;
    terms.total = tape.value(total).v;
    Ok((total, terms))
}

/// Record the whole-batch loss of a model on a fresh tape. The returned node
/// is differentiable with respect to every model parameter.
pub fn compute_loss(
    tape: &mut Tape,
    model: &crate::model::Model,
    problem: &PdeProblem,
    points: &CollocationSet,
    lambda_bc: f64,
    gamma_ic: f64,
) -> Result<(Var, LossTerms)> {
    let flat = model.flatten();
    let vars = tape.alloc_params(flat.as_slice());
    record_full_loss(tape, &vars, &model.shape(), problem, points, lambda_bc, gamma_ic)
}

struct ChunkOut {
    sum: f64,
    grad: Vec<f64>,
    exp_clamps: usize,
}

struct Chunk<'p> {
    kind: PointKind,
    seed: f64,
    interior: &'p [(f64, f64)],
    boundary: &'p [(f64, f64, f64)],
    initial: &'p [(f64, f64)],
}

fn run_chunk(
    chunk: &Chunk<'_>,
    shape: &ModelShape,
    params: &[f64],
    problem: &PdeProblem,
) -> Result<ChunkOut> {
    let mut tape = Tape::new();
    let vars = tape.alloc_params(params);
    let mark = tape.mark();
    let mut adj: Vec<Jet2> = Vec::new();
    let mut grad = vec![0.0; params.len()];
    let mut scratch = Scratch::default();
    let mut sum = 0.0;

    let len = match chunk.kind {
        PointKind::Interior => chunk.interior.len(),
        PointKind::Boundary => chunk.boundary.len(),
        PointKind::Initial => chunk.initial.len(),
    };
    for i in 0..len {
        tape.rewind(mark);
        let (x, t, target) = match chunk.kind {
            PointKind::Interior => {
                let (x, t) = chunk.interior[i];
                (x, t, 0.0)
            }
            PointKind::Boundary => chunk.boundary[i],
            PointKind::Initial => {
                let (x, target) = chunk.initial[i];
                (x, 0.0, target)
            }
        };
        let sq =
            record_point_term(&mut tape, &vars, shape, problem, chunk.kind, x, t, target, &mut scratch)?;
        sum += tape.value(sq).v;
        tape.backprop_accumulate(sq, chunk.seed, &mut adj)?;
    }
    for (g, a) in grad.iter_mut().zip(adj.iter().take(params.len())) {
        *g += a.v;
    }
    Ok(ChunkOut { sum, grad, exp_clamps: tape.exp_clamp_count() })
}

/// Exp-clamp warnings observed during the last `loss_and_grad` call.
#[derive(Clone, Copy, Debug, Default)]
pub struct LossStats {
    pub exp_clamps: usize,
}

/// Full-batch loss and parameter gradient. `grad_out` is overwritten.
pub fn loss_and_grad(
    shape: &ModelShape,
    params: &[f64],
    problem: &PdeProblem,
    points: &CollocationSet,
    lambda_bc: f64,
    gamma_ic: f64,
    grad_out: &mut [f64],
) -> Result<(LossTerms, LossStats)> {
    assert_eq!(grad_out.len(), params.len());
    if points.interior.is_empty() || points.boundary.is_empty() || points.initial.is_empty() {
        return Err(Error::Config("empty collocation set".into()));
    }

    let mut chunks: Vec<Chunk<'_>> = Vec::new();
    let empty = Chunk {
        kind: PointKind::Interior,
        seed: 0.0,
        interior: &[],
        boundary: &[],
        initial: &[],
    };
    let n_int = points.interior.len();
    for slice in points.interior.chunks(CHUNK) {
        chunks.push(Chunk {
            kind: PointKind::Interior,
            seed: 1.0 / n_int as f64,
            interior: slice,
            ..empty
        });
    }
    let n_bc = points.boundary.len();
    for slice in points.boundary.chunks(CHUNK) {
        chunks.push(Chunk {
            kind: PointKind::Boundary,
            seed: lambda_bc / n_bc as f64,
            boundary: slice,
            ..empty
        });
    }
    let n_ic = points.initial.len();
    for slice in points.initial.chunks(CHUNK) {
        chunks.push(Chunk {
            kind: PointKind::Initial,
            seed: gamma_ic / n_ic as f64,
            initial: slice,
            ..empty
        });
    }

    let outs: Result<Vec<(PointKind, ChunkOut)>> = chunks
        .par_iter()
        .map(|c| run_chunk(c, shape, params, problem).map(|o| (c.kind, o)))
        .collect();
    let outs = outs?;

    grad_out.fill(0.0);
    let mut sums = [0.0; 3];
    let mut stats = LossStats::default();
    for (kind, out) in &outs {
        let slot = match kind {
            PointKind::Interior => 0,
            PointKind::Boundary => 1,
            PointKind::Initial => 2,
        };
        sums[slot] += out.sum;
        stats.exp_clamps += out.exp_clamps;
        for (g, d) in grad_out.iter_mut().zip(out.grad.iter()) {
            *g += d;
        }
    }

    let terms = LossTerms {
        pde: sums[0] / n_int as f64,
        bc: sums[1] / n_bc as f64,
        ic: sums[2] / n_ic as f64,
        total: sums[0] / n_int as f64
            + lambda_bc * sums[1] / n_bc as f64
            + gamma_ic * sums[2] / n_ic as f64,
    };
    Ok((terms, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autodiff::check_gradient;
    use crate::basis::BasisFamily;
    use crate::model::{GenModel, Model};
    use crate::pde::heat_problem;
    use crate::training::config::{Sampling, TrainConfig};
    use crate::training::sample::sample_collocation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small_points(n: usize) -> (PdeProblem, CollocationSet) {
        let problem = heat_problem();
        let cfg = TrainConfig {
            n_interior: n,
            n_boundary: 8,
            n_initial: 8,
            ..TrainConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let set = sample_collocation(&problem, &cfg, &mut rng);
        (problem, set)
    }

    use crate::pde::PdeProblem;

    fn small_gen(seed: u64) -> Model {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Model::Gen(
            GenModel::init(
                BasisFamily::SineHeat,
                4,
                0,
                crate::domain::DomainBox::new(0.0, 2.0, 0.0, 2.0).unwrap(),
                &mut rng,
            )
            .unwrap(),
        )
    }

    #[test]
    fn exact_model_has_negligible_loss() {
        let (problem, points) = small_points(32);
        let model = Model::Exact { problem: crate::pde::ProblemId::Heat };
        let mut tape = Tape::new();
        let (_, terms) = compute_loss(&mut tape, &model, &problem, &points, 1.0, 1.0).unwrap();
        assert!(terms.total < 1e-12, "exact-solution loss {}", terms.total);
    }

    #[test]
    fn zero_model_ic_term_is_mean_of_squared_profile() {
        // zero output model: MSE_PDE = 0, MSE_IC = mean sin^2(pi x / 2) = 1/2
        let problem = heat_problem();
        let cfg = TrainConfig {
            n_interior: 16,
            n_boundary: 16,
            n_initial: 4001,
            sampling: Sampling::Grid,
            ..TrainConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let points = sample_collocation(&problem, &cfg, &mut rng);
        let mut model = small_gen(3);
        if let Model::Gen(g) = &mut model {
            g.net.w2.iter_mut().for_each(|w| *w = 0.0);
            g.net.b2 = 0.0;
        }
        let mut tape = Tape::new();
        let (_, terms) = compute_loss(&mut tape, &model, &problem, &points, 1.0, 1.0).unwrap();
        assert!(terms.pde.abs() < 1e-25);
        assert!((terms.ic - 0.5).abs() < 1e-3, "ic term {}", terms.ic);
    }

    #[test]
    fn zero_weights_reduce_to_pde_term() {
        let (problem, points) = small_points(16);
        let model = small_gen(5);
        let mut tape = Tape::new();
        let (_, terms) = compute_loss(&mut tape, &model, &problem, &points, 0.0, 0.0).unwrap();
        assert_eq!(terms.total, terms.pde);
    }

    #[test]
    fn chunked_gradient_matches_single_tape() {
        let (problem, points) = small_points(100);
        let model = small_gen(8);
        let mut tape = Tape::new();
        let (loss, terms_a) = compute_loss(&mut tape, &model, &problem, &points, 1.0, 1.0).unwrap();
        let grad_a = tape.grad(loss).unwrap();

        let flat = model.flatten();
        let mut grad_b = vec![0.0; flat.len()];
        let (terms_b, _) = loss_and_grad(
            &model.shape(),
            flat.as_slice(),
            &problem,
            &points,
            1.0,
            1.0,
            &mut grad_b,
        )
        .unwrap();
        assert!((terms_a.total - terms_b.total).abs() < 1e-12 * (1.0 + terms_a.total));
        for (a, b) in grad_a.iter().zip(grad_b.iter()) {
            assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn full_loss_gradient_matches_finite_differences() {
        let (problem, points) = small_points(10);
        let model = small_gen(12);
        let flat = model.flatten();
        let shape = model.shape();
        let dev = check_gradient(
            |tape, vars| {
                record_full_loss(tape, vars, &shape, &problem, &points, 1.0, 1.0)
                    .map(|(loss, _)| loss)
            },
            flat.as_slice(),
            1e-5,
        )
        .unwrap();
        assert!(dev <= 1e-5, "loss gradient deviation {dev}");
    }

    #[test]
    fn chunked_result_is_thread_count_invariant() {
        let (problem, points) = small_points(300);
        let model = small_gen(15);
        let flat = model.flatten();
        let shape = model.shape();
        let mut grad_par = vec![0.0; flat.len()];
        let (terms_par, _) =
            loss_and_grad(&shape, flat.as_slice(), &problem, &points, 1.0, 1.0, &mut grad_par)
                .unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let (terms_seq, grad_seq) = pool.install(|| {
            let mut g = vec![0.0; flat.len()];
            let (t, _) =
                loss_and_grad(&shape, flat.as_slice(), &problem, &points, 1.0, 1.0, &mut g)
                    .unwrap();
            (t, g)
        });
        assert_eq!(terms_par.total.to_bits(), terms_seq.total.to_bits());
        for (a, b) in grad_par.iter().zip(grad_seq.iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
