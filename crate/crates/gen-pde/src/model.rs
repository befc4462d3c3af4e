//! Solution models: the basis-plus-synthesis network, the baseline MLP, and
//! a frozen reference model used as a fixture.

use rand::Rng;

use crate::autodiff::{DirectCtx, Jet2, JetCtx, ParamLayout, ParamRole, ParamVector};
use crate::basis::{init_basis, BasisFamily, BasisLayout, BasisSet, FeedMode};
use crate::domain::DomainBox;
use crate::error::Result;
use crate::pde::{ProblemId, Reference};

/// Hidden width of the synthesis network.
pub const SYNTH_HIDDEN: usize = 20;

/// Single-hidden-layer network composing basis outputs into `u(x, t)`:
/// 20 tanh units, affine output.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SynthesisNet {
    /// `SYNTH_HIDDEN x inputs`, row-major.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
    pub inputs: usize,
}

fn glorot_bound(fan_in: usize, fan_out: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}

/// Fan-balanced uniform weights, zero biases.
pub fn init_net(input_width: usize, rng: &mut impl Rng) -> SynthesisNet {
    assert!(input_width >= 1);
    let bound = glorot_bound(input_width, SYNTH_HIDDEN);
    let w1 = (0..SYNTH_HIDDEN * input_width)
        .map(|_| rng.random_range(-bound..bound))
        .collect();
    let out_bound = glorot_bound(SYNTH_HIDDEN, 1);
    let w2 = (0..SYNTH_HIDDEN).map(|_| rng.random_range(-out_bound..out_bound)).collect();
    SynthesisNet { w1, b1: vec![0.0; SYNTH_HIDDEN], w2, b2: 0.0, inputs: input_width }
}

/// Basis set plus synthesis network.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GenModel {
    pub basis: BasisSet,
    pub net: SynthesisNet,
}

impl GenModel {
    pub fn init(
        family: BasisFamily,
        count_m: usize,
        count_n: usize,
        domain: DomainBox,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        let basis = init_basis(family, count_m, count_n, domain, rng)?;
        let net = init_net(basis.output_len(), rng);
        Ok(GenModel { basis, net })
    }

    pub fn with_feed(mut self, feed: FeedMode, rng: &mut impl Rng) -> Self {
        self.basis.feed = feed;
        if self.basis.output_len() != self.net.inputs {
            self.net = init_net(self.basis.output_len(), rng);
        }
        self
    }

    pub fn shape(&self) -> GenShape {
        GenShape {
            basis: self.basis.layout(),
            domain: self.basis.domain,
            inputs: self.net.inputs,
        }
    }
}

/// Baseline MLP on raw `(x, t)`.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PinnModel {
    /// Per-layer `(weights row-major, biases)`.
    pub layers: Vec<(Vec<f64>, Vec<f64>)>,
    /// Layer widths including input (2) and output (1).
    pub widths: Vec<usize>,
}

impl PinnModel {
    /// Default architecture: 4 hidden layers of 20 tanh units.
    pub fn default_widths() -> Vec<usize> {
        vec![2, 20, 20, 20, 20, 1]
    }

    pub fn init(hidden: &[usize], rng: &mut impl Rng) -> Self {
        let mut widths = Vec::with_capacity(hidden.len() + 2);
        widths.push(2);
        widths.extend_from_slice(hidden);
        widths.push(1);
        let layers = widths
            .windows(2)
            .map(|w| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let bound = glorot_bound(fan_in, fan_out);
                let weights =
                    (0..fan_in * fan_out).map(|_| rng.random_range(-bound..bound)).collect();
                (weights, vec![0.0; fan_out])
            })
            .collect();
        PinnModel { layers, widths }
    }

    pub fn shape(&self) -> PinnShape {
        PinnShape { widths: self.widths.clone() }
    }
}

/// Layout descriptor for the hot path: everything needed to evaluate a GEN
/// model from a flat parameter slice.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GenShape {
    pub basis: BasisLayout,
    pub domain: DomainBox,
    pub inputs: usize,
}

impl GenShape {
    pub fn param_count(&self) -> usize {
        self.basis.param_len() + SYNTH_HIDDEN * self.inputs + SYNTH_HIDDEN + SYNTH_HIDDEN + 1
    }

    pub fn layout(&self) -> ParamLayout {
        ParamLayout::builder()
            .segment(ParamRole::Basis, self.basis.param_len())
            .segment(ParamRole::HiddenWeights, SYNTH_HIDDEN * self.inputs)
            .segment(ParamRole::HiddenBias, SYNTH_HIDDEN)
            .segment(ParamRole::OutputWeights, SYNTH_HIDDEN)
            .segment(ParamRole::OutputBias, 1)
            .build()
    }

    /// Record/evaluate `u(x, t)`; parameters are read from the context.
    pub fn forward<C: JetCtx>(&self, ctx: &mut C, x: f64, t: f64, scratch: &mut Scratch<C::V>) -> C::V {
        let (xj, tj) = ctx.inputs(x, t);
        scratch.outputs.clear();
        self.basis.eval_into(ctx, 0, xj, tj, &mut scratch.outputs);
        debug_assert_eq!(scratch.outputs.len(), self.inputs);

        let w1 = self.basis.param_len();
        let b1 = w1 + SYNTH_HIDDEN * self.inputs;
        let w2 = b1 + SYNTH_HIDDEN;
        let b2 = w2 + SYNTH_HIDDEN;

        scratch.hidden.clear();
        for row in 0..SYNTH_HIDDEN {
            scratch.terms.clear();
            for (k, &basis_out) in scratch.outputs.iter().enumerate() {
                let w = ctx.param(w1 + row * self.inputs + k);
                scratch.terms.push((w, basis_out));
            }
            let bias = ctx.param(b1 + row);
            let lin = ctx.linear(bias, &scratch.terms);
            scratch.hidden.push(ctx.tanh(lin));
        }

        scratch.terms.clear();
        for (k, &h) in scratch.hidden.iter().enumerate() {
            let w = ctx.param(w2 + k);
            scratch.terms.push((w, h));
        }
        let bias = ctx.param(b2);
        ctx.linear(bias, &scratch.terms)
    }
}

/// Layout descriptor for the baseline MLP.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PinnShape {
    pub widths: Vec<usize>,
}

impl PinnShape {
    pub fn param_count(&self) -> usize {
        self.widths.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }

    pub fn layout(&self) -> ParamLayout {
        let mut b = ParamLayout::builder();
        for (i, w) in self.widths.windows(2).enumerate() {
            b = b
                .segment(ParamRole::LayerWeights(i), w[0] * w[1])
                .segment(ParamRole::LayerBias(i), w[1]);
        }
        b.build()
    }

    pub fn forward<C: JetCtx>(&self, ctx: &mut C, x: f64, t: f64, scratch: &mut Scratch<C::V>) -> C::V {
        let (xj, tj) = ctx.inputs(x, t);
        scratch.outputs.clear();
        scratch.outputs.push(xj);
        scratch.outputs.push(tj);

        let mut offset = 0;
        let n_layers = self.widths.len() - 1;
        for (layer, w) in self.widths.windows(2).enumerate() {
            let (fan_in, fan_out) = (w[0], w[1]);
            let w_off = offset;
            let b_off = offset + fan_in * fan_out;
            offset = b_off + fan_out;
            scratch.hidden.clear();
            for row in 0..fan_out {
                scratch.terms.clear();
                for (k, &input) in scratch.outputs.iter().enumerate() {
                    let wv = ctx.param(w_off + row * fan_in + k);
                    scratch.terms.push((wv, input));
                }
                let bias = ctx.param(b_off + row);
                let lin = ctx.linear(bias, &scratch.terms);
                let out = if layer + 1 < n_layers { ctx.tanh(lin) } else { lin };
                scratch.hidden.push(out);
            }
            std::mem::swap(&mut scratch.outputs, &mut scratch.hidden);
        }
        scratch.outputs[0]
    }
}

/// Reusable per-thread buffers for forward passes.
pub struct Scratch<V> {
    pub outputs: Vec<V>,
    pub hidden: Vec<V>,
    pub terms: Vec<(V, V)>,
}

impl<V> Default for Scratch<V> {
    fn default() -> Self {
        Scratch { outputs: Vec::new(), hidden: Vec::new(), terms: Vec::new() }
    }
}

/// Any trainable or frozen solution model.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Model {
    Gen(GenModel),
    Pinn(PinnModel),
    /// The problem's reference solution wired as a frozen, parameterless
    /// model; test fixture and sanity baseline.
    Exact { problem: ProblemId },
}

/// Shape companion of [`Model`] for flat-parameter evaluation.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum ModelShape {
    Gen(GenShape),
    Pinn(PinnShape),
    Exact { problem: ProblemId },
}

impl ModelShape {
    pub fn param_count(&self) -> usize {
        match self {
            ModelShape::Gen(s) => s.param_count(),
            ModelShape::Pinn(s) => s.param_count(),
            ModelShape::Exact { .. } => 0,
        }
    }

    pub fn layout(&self) -> ParamLayout {
        match self {
            ModelShape::Gen(s) => s.layout(),
            ModelShape::Pinn(s) => s.layout(),
            ModelShape::Exact { .. } => ParamLayout::builder().build(),
        }
    }

    pub fn forward<C: JetCtx>(
        &self,
        ctx: &mut C,
        x: f64,
        t: f64,
        scratch: &mut Scratch<C::V>,
    ) -> C::V {
        match self {
            ModelShape::Gen(s) => s.forward(ctx, x, t, scratch),
            ModelShape::Pinn(s) => s.forward(ctx, x, t, scratch),
            ModelShape::Exact { problem } => {
                let jet = Reference::for_problem(*problem).jet(x, t);
                ctx.raw_jet(jet)
            }
        }
    }
}

impl Model {
    pub fn shape(&self) -> ModelShape {
        match self {
            Model::Gen(m) => ModelShape::Gen(m.shape()),
            Model::Pinn(m) => ModelShape::Pinn(m.shape()),
            Model::Exact { problem } => ModelShape::Exact { problem: *problem },
        }
    }

    pub fn param_count(&self) -> usize {
        self.shape().param_count()
    }

    /// Flatten into the stable order: basis parameters, then `w1` row-major,
    /// `b1`, `w2`, `b2` (GEN); per-layer weights then biases (PINN).
    pub fn flatten(&self) -> ParamVector {
        let mut values = Vec::with_capacity(self.param_count());
        match self {
            Model::Gen(m) => {
                values.extend_from_slice(&m.basis.params);
                values.extend_from_slice(&m.net.w1);
                values.extend_from_slice(&m.net.b1);
                values.extend_from_slice(&m.net.w2);
                values.push(m.net.b2);
            }
            Model::Pinn(m) => {
                for (w, b) in &m.layers {
                    values.extend_from_slice(w);
                    values.extend_from_slice(b);
                }
            }
            Model::Exact { .. } => {}
        }
        ParamVector::new(values)
    }

    /// Rebuild a model of the same shape from a flat vector.
    pub fn unflatten(&self, params: &ParamVector) -> Result<Model> {
        params.expect_len(self.param_count())?;
        let v = params.as_slice();
        Ok(match self {
            Model::Gen(m) => {
                let nb = m.basis.params.len();
                let k = m.net.inputs;
                let w1_end = nb + SYNTH_HIDDEN * k;
                let b1_end = w1_end + SYNTH_HIDDEN;
                let w2_end = b1_end + SYNTH_HIDDEN;
                let mut basis = m.basis.clone();
                basis.params = v[..nb].to_vec();
                Model::Gen(GenModel {
                    basis,
                    net: SynthesisNet {
                        w1: v[nb..w1_end].to_vec(),
                        b1: v[w1_end..b1_end].to_vec(),
                        w2: v[b1_end..w2_end].to_vec(),
                        b2: v[w2_end],
                        inputs: k,
                    },
                })
            }
            Model::Pinn(m) => {
                let mut layers = Vec::with_capacity(m.layers.len());
                let mut o = 0;
                for w in m.widths.windows(2) {
                    let (fan_in, fan_out) = (w[0], w[1]);
                    let weights = v[o..o + fan_in * fan_out].to_vec();
                    o += fan_in * fan_out;
                    let biases = v[o..o + fan_out].to_vec();
                    o += fan_out;
                    layers.push((weights, biases));
                }
                Model::Pinn(PinnModel { layers, widths: m.widths.clone() })
            }
            Model::Exact { problem } => Model::Exact { problem: *problem },
        })
    }

    /// Evaluate `u` and its partials at a point (no tape).
    pub fn eval_jet(&self, x: f64, t: f64) -> Jet2 {
        let params = self.flatten();
        let shape = self.shape();
        let mut ctx = DirectCtx::new(params.as_slice());
        let mut scratch = Scratch::default();
        let v = shape.forward(&mut ctx, x, t, &mut scratch);
        ctx.value(v)
    }

    pub fn is_trainable(&self) -> bool {
        !matches!(self, Model::Exact { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            Model::Gen(m) => format!(
                "gen({}, m={}, n={})",
                m.basis.family.tag(),
                m.basis.count_m,
                m.basis.count_n
            ),
            Model::Pinn(m) => format!("pinn({:?})", m.widths),
            Model::Exact { problem } => format!("exact({problem:?})"),
        }
    }
}

/// Spec'd convenience: evaluate a GEN model at seeded inputs.
pub fn forward_gen(model: &GenModel, x: f64, t: f64) -> Jet2 {
    Model::Gen(model.clone()).eval_jet(x, t)
}

/// Spec'd convenience: evaluate the baseline MLP at seeded inputs.
pub fn forward_pinn(model: &PinnModel, x: f64, t: f64) -> Jet2 {
    Model::Pinn(model.clone()).eval_jet(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_box() -> DomainBox {
        DomainBox::new(0.0, 2.0, 0.0, 2.0).unwrap()
    }

    fn heat_gen(seed: u64) -> GenModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GenModel::init(BasisFamily::SineHeat, 25, 0, unit_box(), &mut rng).unwrap()
    }

    #[test]
    fn init_net_bounds_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let net = init_net(25, &mut rng);
        assert_eq!(net.w1.len(), 20 * 25);
        let bound = (6.0 / 45.0f64).sqrt();
        assert!(net.w1.iter().all(|w| w.abs() <= bound));
        assert!(net.b1.iter().all(|&b| b == 0.0));
        assert_eq!(net.b2, 0.0);
        let net2 = init_net(25, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(net, net2);
    }

    #[test]
    fn gen_param_count_sine_heat_25() {
        let model = Model::Gen(heat_gen(7));
        // 25*3 + 20*25 + 20 + 20 + 1
        assert_eq!(model.param_count(), 616);
        assert_eq!(model.flatten().len(), 616);
    }

    #[test]
    fn pinn_param_count_default() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let model = Model::Pinn(PinnModel::init(&[20, 20, 20, 20], &mut rng));
        // 2*20+20 + 3*(20*20+20) + 20+1
        assert_eq!(model.param_count(), 1341);
    }

    #[test]
    fn flatten_round_trip() {
        let model = Model::Gen(heat_gen(13));
        let flat = model.flatten();
        let back = model.unflatten(&flat).unwrap();
        assert_eq!(model, back);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pinn = Model::Pinn(PinnModel::init(&[20, 20], &mut rng));
        assert_eq!(pinn, pinn.unflatten(&pinn.flatten()).unwrap());
        // length mismatch is a structural error
        assert!(model.unflatten(&ParamVector::zeros(10)).is_err());
    }

    #[test]
    fn constant_output_when_w2_zero() {
        let mut m = heat_gen(5);
        m.net.w2.iter_mut().for_each(|w| *w = 0.0);
        m.net.b2 = 4.25;
        let u = forward_gen(&m, 1.3, 0.7);
        assert_eq!(u.v, 4.25);
        assert_eq!((u.dx, u.dt, u.dxx, u.dxt, u.dtt), (0.0, 0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn zero_weight_pinn_outputs_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut m = PinnModel::init(&[20, 20, 20, 20], &mut rng);
        for (w, b) in m.layers.iter_mut() {
            w.iter_mut().for_each(|x| *x = 0.0);
            b.iter_mut().for_each(|x| *x = 0.0);
        }
        let u = forward_pinn(&m, 0.4, 1.2);
        assert_eq!(u.v, 0.0);
        assert_eq!(u.dx, 0.0);
    }

    #[test]
    fn depth_one_pinn_matches_hand_computation() {
        // single hidden unit: u = w2 * tanh(wx*x + wt*t + b1) + b2
        let m = PinnModel {
            layers: vec![
                (vec![0.3, -0.7], vec![0.1]),
                (vec![1.4], vec![-0.2]),
            ],
            widths: vec![2, 1, 1],
        };
        let (x, t) = (0.8, 0.5);
        let u = forward_pinn(&m, x, t);
        let want = 1.4 * (0.3 * x - 0.7 * t + 0.1).tanh() - 0.2;
        assert!((u.v - want).abs() < 1e-15);
    }

    #[test]
    fn permuting_bases_and_columns_leaves_output_unchanged() {
        let m = heat_gen(21);
        let u0 = forward_gen(&m, 0.9, 0.4);
        // rotate basis order by 7 and w1 columns identically
        let k = m.net.inputs;
        let mut permuted = m.clone();
        let rot = 7;
        for i in 0..k {
            let src = (i + rot) % k;
            permuted.basis.params[3 * i..3 * i + 3]
                .copy_from_slice(&m.basis.params[3 * src..3 * src + 3]);
            for row in 0..SYNTH_HIDDEN {
                permuted.net.w1[row * k + i] = m.net.w1[row * k + src];
            }
        }
        let u1 = forward_gen(&permuted, 0.9, 0.4);
        assert!((u0.v - u1.v).abs() < 1e-12);
        assert!((u0.dxx - u1.dxx).abs() < 1e-9 * (1.0 + u0.dxx.abs()));
    }

    #[test]
    fn one_hot_wiring_reduces_to_tanh_of_selected_basis() {
        let mut m = heat_gen(2);
        let k = m.net.inputs;
        let selected = 4;
        m.net.w1.iter_mut().for_each(|w| *w = 0.0);
        m.net.b1.iter_mut().for_each(|b| *b = 0.0);
        m.net.w2.iter_mut().for_each(|w| *w = 0.0);
        m.net.b2 = 0.0;
        // hidden unit 0 reads basis `selected` only; output reads hidden 0
        m.net.w1[selected] = 1.0;
        let _ = k;
        m.net.w2[0] = 1.0;
        let (x, t) = (1.1, 0.6);
        let u = forward_gen(&m, x, t);
        let basis_val = m.basis.eval(Jet2::seed_x(x), Jet2::seed_t(t))[selected].v;
        assert_eq!(u.v, basis_val.tanh());
    }

    #[test]
    fn forward_derivatives_match_finite_differences() {
        let checks: Vec<Model> = vec![
            Model::Gen(heat_gen(31)),
            Model::Gen(
                GenModel::init(
                    BasisFamily::GaussHeatProduct,
                    3,
                    3,
                    unit_box(),
                    &mut ChaCha8Rng::seed_from_u64(31),
                )
                .unwrap(),
            ),
            Model::Gen(
                GenModel::init(
                    BasisFamily::SineTraveling,
                    6,
                    0,
                    unit_box(),
                    &mut ChaCha8Rng::seed_from_u64(32),
                )
                .unwrap(),
            ),
            Model::Pinn(PinnModel::init(&[20, 20], &mut ChaCha8Rng::seed_from_u64(33))),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let h = 1e-4;
        for model in &checks {
            for _ in 0..25 {
                let x = rng.random_range(0.2..1.8);
                let t = rng.random_range(0.2..1.8);
                let u = model.eval_jet(x, t);
                let f = |x: f64, t: f64| model.eval_jet(x, t).v;
                let fd_dx = (f(x + h, t) - f(x - h, t)) / (2.0 * h);
                let fd_dxx = (f(x + h, t) - 2.0 * f(x, t) + f(x - h, t)) / (h * h);
                let fd_dtt = (f(x, t + h) - 2.0 * f(x, t) + f(x, t - h)) / (h * h);
                assert!(
                    (u.dx - fd_dx).abs() <= 1e-5 * (1.0 + fd_dx.abs()),
                    "{} dx: {} vs {}",
                    model.describe(),
                    u.dx,
                    fd_dx
                );
                assert!(
                    (u.dxx - fd_dxx).abs() <= 1e-4 * (1.0 + fd_dxx.abs()),
                    "{} dxx: {} vs {}",
                    model.describe(),
                    u.dxx,
                    fd_dxx
                );
                assert!(
                    (u.dtt - fd_dtt).abs() <= 1e-4 * (1.0 + fd_dtt.abs()),
                    "{} dtt: {} vs {}",
                    model.describe(),
                    u.dtt,
                    fd_dtt
                );
            }
        }
    }
}
