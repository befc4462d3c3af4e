//! Reverse-mode tape over [`Jet2`] values.
//!
//! The tape records every operation of a forward pass as an append-only node
//! list. Each node stores its operation kind, operand indices and the
//! resulting jet; the local partials of an output jet with respect to its
//! operand jets are recovered from those recorded values during the reverse
//! sweep. Because a node's output fields depend on the operand's derivative
//! fields as well as its value, adjoints are themselves six-field quantities
//! and the sweep propagates all of them. That is what makes losses built from
//! derivative channels (PDE residuals) differentiable with respect to the
//! parameters.
//!
//! Parameters are leaf nodes recorded at the front of the tape; the gradient
//! of a scalar node with respect to parameter `i` is the value-channel
//! adjoint of leaf `i` after the sweep.
//!
//! Nodes whose derivative fields are structurally zero (constants,
//! parameters, field extractions, and anything composed purely from them)
//! carry a flag that switches both sweeps to scalar rules; in dense layers
//! most coefficients are parameters, so this roughly halves the work.

use super::jet::{Jet2, JetField, DIV_GUARD, EXP_CLAMP};
use crate::error::{Error, Result};

/// Handle to a recorded node. Only valid for the tape that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Var(pub(crate) u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Leaf,
    Add(u32, u32),
    Sub(u32, u32),
    Mul(u32, u32),
    Div(u32, u32),
    Neg(u32),
    Sin(u32),
    Cos(u32),
    Exp(u32),
    Tanh(u32),
    Ln(u32),
    Abs(u32),
    Recip(u32),
    Powi(u32, i32),
    Powf(u32, f64),
    Scale(u32, f64),
    AddConst(u32, f64),
    Field(u32, JetField),
    /// `bias + sum_k w_k * in_k` over pairs stored in the operand pool.
    Linear { bias: u32, start: u32, len: u32 },
}



/// Snapshot of the tape length, used to rewind per-point recordings while
/// keeping the parameter leaves in place.
#[derive(Clone, Copy, Debug)]
pub struct TapeMark {
    nodes: usize,
    pool: usize,
}

/// Single-writer recording of a jet-valued computation. Stored as parallel
/// arrays: operation kinds, output jets, and the structural zero-field flags
/// (constants, parameters, field extractions and compositions thereof, whose
/// derivative-field adjoints are never consumed).
#[derive(Default)]
pub struct Tape {
    ops: Vec<Op>,
    values: Vec<Jet2>,
    zf: Vec<bool>,
    pool: Vec<(u32, u32)>,
    n_params: usize,
    exp_clamps: usize,
}

/// Local derivatives of a unary primitive at the operand value `v`, reusing
/// the recorded output `out = f(v)` where the derivatives are expressible
/// through it (exp, tanh, recip need no second libm call). Third order feeds
/// the reverse sweep through second-order jets.
#[inline]
fn unary_locals(op: Op, v: f64, out: f64) -> (f64, f64, f64) {
    match op {
        Op::Neg(_) => (-1.0, 0.0, 0.0),
        Op::Sin(_) => {
            let c = v.cos();
            (c, -out, -c)
        }
        Op::Cos(_) => {
            let s = v.sin();
            (-s, -out, s)
        }
        Op::Exp(_) => {
            if v > EXP_CLAMP {
                (0.0, 0.0, 0.0)
            } else {
                (out, out, out)
            }
        }
        Op::Tanh(_) => {
            let s = 1.0 - out * out;
            (s, -2.0 * out * s, 2.0 * s * (2.0 * out * out - s))
        }
        Op::Ln(_) => {
            let r = 1.0 / v;
            (r, -r * r, 2.0 * r * r * r)
        }
        Op::Abs(_) => (if v < 0.0 { -1.0 } else { 1.0 }, 0.0, 0.0),
        Op::Recip(_) => {
            let r2 = out * out;
            (-r2, 2.0 * r2 * out, -6.0 * r2 * r2)
        }
        Op::Powi(_, n) => {
            let nf = f64::from(n);
            (
                nf * v.powi(n - 1),
                nf * (nf - 1.0) * v.powi(n - 2),
                nf * (nf - 1.0) * (nf - 2.0) * v.powi(n - 3),
            )
        }
        Op::Powf(_, p) => (
            p * v.powf(p - 1.0),
            p * (p - 1.0) * v.powf(p - 2.0),
            p * (p - 1.0) * (p - 2.0) * v.powf(p - 3.0),
        ),
        _ => unreachable!("not a unary primitive"),
    }
}

#[inline]
fn unary_value(op: Op, a: Jet2, a_zf: bool) -> Jet2 {
    let f0 = match op {
        Op::Neg(_) => return if a_zf { Jet2::constant(-a.v) } else { -a },
        Op::Sin(_) => a.v.sin(),
        Op::Cos(_) => a.v.cos(),
        Op::Exp(_) => {
            if a.v > EXP_CLAMP {
                return Jet2::constant(EXP_CLAMP.exp());
            }
            a.v.exp()
        }
        Op::Tanh(_) => a.v.tanh(),
        Op::Ln(_) => a.v.ln(),
        Op::Abs(_) => a.v.abs(),
        Op::Recip(_) => 1.0 / a.v,
        Op::Powi(_, n) => a.v.powi(n),
        Op::Powf(_, p) => a.v.powf(p),
        _ => unreachable!("not a unary primitive"),
    };
    if a_zf {
        Jet2::constant(f0)
    } else {
        let (f1, f2, _) = unary_locals(op, a.v, f0);
        a.apply_unary(f0, f1, f2)
    }
}

#[inline]
fn mul_value(a: Jet2, a_zf: bool, b: Jet2, b_zf: bool) -> Jet2 {
    match (a_zf, b_zf) {
        (true, true) => Jet2::constant(a.v * b.v),
        (true, false) => b.scale(a.v),
        (false, true) => a.scale(b.v),
        (false, false) => a * b,
    }
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    /// Number of recorded nodes.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// How many times `exp` hit the overflow clamp while recording.
    pub fn exp_clamp_count(&self) -> usize {
        self.exp_clamps
    }

    /// Record the trainable parameters as the leading leaf block. Must be
    /// called on an empty tape.
    pub fn alloc_params(&mut self, params: &[f64]) -> Vec<Var> {
        assert!(self.ops.is_empty(), "parameter leaves must be recorded first");
        self.n_params = params.len();
        params
            .iter()
            .map(|&p| self.push(Op::Leaf, Jet2::constant(p), true))
            .collect()
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn mark(&self) -> TapeMark {
        TapeMark { nodes: self.ops.len(), pool: self.pool.len() }
    }

    pub fn rewind(&mut self, mark: TapeMark) {
        debug_assert!(mark.nodes >= self.n_params);
        self.ops.truncate(mark.nodes);
        self.values.truncate(mark.nodes);
        self.zf.truncate(mark.nodes);
        self.pool.truncate(mark.pool);
    }

    pub fn value(&self, var: Var) -> Jet2 {
        self.values[var.index()]
    }

    fn push(&mut self, op: Op, value: Jet2, zf: bool) -> Var {
        let idx = self.ops.len() as u32;
        self.ops.push(op);
        self.values.push(value);
        self.zf.push(zf);
        Var(idx)
    }

    fn val(&self, i: u32) -> Jet2 {
        self.values[i as usize]
    }

    fn is_zf(&self, i: u32) -> bool {
        self.zf[i as usize]
    }

    /// Record a constant (all derivative fields zero).
    pub fn constant(&mut self, c: f64) -> Var {
        self.push(Op::Leaf, Jet2::constant(c), true)
    }

    /// Record an externally produced jet as a leaf. Its fields participate in
    /// downstream arithmetic but receive no gradient.
    pub fn raw_jet(&mut self, jet: Jet2) -> Var {
        let zf = jet.dx == 0.0
            && jet.dt == 0.0
            && jet.dxx == 0.0
            && jet.dxt == 0.0
            && jet.dtt == 0.0;
        self.push(Op::Leaf, jet, zf)
    }

    /// Record the seeded inputs for a point `(x, t)`.
    pub fn seed_inputs(&mut self, x: f64, t: f64) -> (Var, Var) {
        (
            self.push(Op::Leaf, Jet2::seed_x(x), false),
            self.push(Op::Leaf, Jet2::seed_t(t), false),
        )
    }

    pub fn add(&mut self, a: Var, b: Var) -> Var {
        let zf = self.is_zf(a.0) && self.is_zf(b.0);
        let v = self.val(a.0) + self.val(b.0);
        self.push(Op::Add(a.0, b.0), v, zf)
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Var {
        let zf = self.is_zf(a.0) && self.is_zf(b.0);
        let v = self.val(a.0) - self.val(b.0);
        self.push(Op::Sub(a.0, b.0), v, zf)
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Var {
        let zf = self.is_zf(a.0) && self.is_zf(b.0);
        let v = mul_value(self.val(a.0), self.is_zf(a.0), self.val(b.0), self.is_zf(b.0));
        self.push(Op::Mul(a.0, b.0), v, zf)
    }

    /// Division with the near-zero guard from the module contract.
    pub fn div(&mut self, a: Var, b: Var) -> Result<Var> {
        let bv = self.val(b.0);
        if bv.v.abs() <= DIV_GUARD {
            return Err(Error::DivisionByNearZero { operand: bv.v });
        }
        let zf = self.is_zf(a.0) && self.is_zf(b.0);
        let v = if zf {
            Jet2::constant(self.val(a.0).v / bv.v)
        } else {
            self.val(a.0) * bv.recip()
        };
        Ok(self.push(Op::Div(a.0, b.0), v, zf))
    }

    pub fn exp(&mut self, a: Var) -> Var {
        if self.val(a.0).v > EXP_CLAMP {
            self.exp_clamps += 1;
        }
        self.unary(Op::Exp(a.0), a)
    }

    pub fn neg(&mut self, a: Var) -> Var {
        self.unary(Op::Neg(a.0), a)
    }

    pub fn sin(&mut self, a: Var) -> Var {
        self.unary(Op::Sin(a.0), a)
    }

    pub fn cos(&mut self, a: Var) -> Var {
        self.unary(Op::Cos(a.0), a)
    }

    pub fn tanh(&mut self, a: Var) -> Var {
        self.unary(Op::Tanh(a.0), a)
    }

    pub fn ln(&mut self, a: Var) -> Var {
        self.unary(Op::Ln(a.0), a)
    }

    pub fn abs(&mut self, a: Var) -> Var {
        self.unary(Op::Abs(a.0), a)
    }

    pub fn recip(&mut self, a: Var) -> Var {
        self.unary(Op::Recip(a.0), a)
    }

    pub fn powi(&mut self, a: Var, n: i32) -> Var {
        self.unary(Op::Powi(a.0, n), a)
    }

    pub fn powf(&mut self, a: Var, p: f64) -> Var {
        self.unary(Op::Powf(a.0, p), a)
    }

    fn unary(&mut self, op: Op, a: Var) -> Var {
        let zf = self.is_zf(a.0);
        let v = unary_value(op, self.val(a.0), zf);
        self.push(op, v, zf)
    }

    pub fn scale(&mut self, a: Var, k: f64) -> Var {
        let zf = self.is_zf(a.0);
        let v = self.val(a.0).scale(k);
        self.push(Op::Scale(a.0, k), v, zf)
    }

    pub fn add_const(&mut self, a: Var, k: f64) -> Var {
        let zf = self.is_zf(a.0);
        let v = self.val(a.0).add_const(k);
        self.push(Op::AddConst(a.0, k), v, zf)
    }

    /// Extract one derivative channel of `a` as a fresh scalar whose own
    /// derivative fields are zero. In the reverse sweep the value adjoint of
    /// the result flows into the chosen channel of `a`, which is how residual
    /// terms couple parameter gradients to input-derivative channels.
    pub fn field(&mut self, a: Var, f: JetField) -> Var {
        let v = Jet2::constant(self.val(a.0).field(f));
        self.push(Op::Field(a.0, f), v, true)
    }

    /// Fused `bias + sum_k w_k * in_k` over full jet products. One node per
    /// dense layer output keeps tapes short for wide models.
    pub fn linear(&mut self, bias: Var, terms: &[(Var, Var)]) -> Var {
        let start = self.pool.len() as u32;
        let mut zf = self.is_zf(bias.0);
        let mut acc = self.val(bias.0);
        for &(w, x) in terms {
            self.pool.push((w.0, x.0));
            zf = zf && self.is_zf(w.0) && self.is_zf(x.0);
            acc = acc + mul_value(self.val(w.0), self.is_zf(w.0), self.val(x.0), self.is_zf(x.0));
        }
        self.push(Op::Linear { bias: bias.0, start, len: terms.len() as u32 }, acc, zf)
    }

    fn check(&self, var: Var) -> Result<()> {
        if var.index() >= self.ops.len() {
            return Err(Error::DanglingNode { index: var.index(), len: self.ops.len() });
        }
        Ok(())
    }

    /// Gradient of the scalar at `loss` with respect to every parameter leaf.
    /// The reverse sweep is seeded on the value channel; derivative fields of
    /// the loss node itself are ignored.
    pub fn grad(&self, loss: Var) -> Result<Vec<f64>> {
        let mut adj = vec![Jet2::default(); self.ops.len()];
        let mut grads = vec![0.0; self.n_params];
        self.backprop(loss, 1.0, &mut adj, &mut grads)?;
        Ok(grads)
    }

    /// Accumulating reverse sweep: seeds `seed` on the value channel of
    /// `loss` and adds the resulting parameter adjoints into `grads`. The
    /// adjoint buffer is resized and cleared here so callers can reuse it.
    pub fn backprop(
        &self,
        loss: Var,
        seed: f64,
        adj: &mut Vec<Jet2>,
        grads: &mut [f64],
    ) -> Result<()> {
        assert_eq!(grads.len(), self.n_params, "gradient buffer length");
        adj.clear();
        self.backprop_accumulate(loss, seed, adj)?;
        for (g, a) in grads.iter_mut().zip(adj.iter().take(self.n_params)) {
            *g += a.v;
        }
        Ok(())
    }

    /// Reverse sweep that preserves the parameter-leaf adjoint prefix across
    /// calls: only the node region above the leaves is re-zeroed. Rewinding
    /// drivers sweep many per-point recordings and read the accumulated leaf
    /// adjoints once at the end (`adj[i].v` for parameter `i`).
    pub fn backprop_accumulate(&self, loss: Var, seed: f64, adj: &mut Vec<Jet2>) -> Result<()> {
        self.check(loss)?;
        adj.truncate(self.n_params);
        adj.resize(self.ops.len(), Jet2::default());
        adj[loss.index()].v = seed;

        for i in (self.n_params..=loss.index()).rev() {
            if self.zf[i] {
                let cv = adj[i].v;
                if cv == 0.0 {
                    continue;
                }
                self.backward_scalar(self.ops[i], self.values[i].v, cv, adj);
            } else {
                let c = adj[i];
                if c == Jet2::default() {
                    continue;
                }
                self.backward_full(self.ops[i], self.values[i].v, c, adj);
            }
        }
        Ok(())
    }

    /// Reverse rules for a node whose derivative fields are structurally
    /// zero: only the value adjoint propagates, and every operand of such a
    /// node is itself structurally zero-field (except `Field`, whose operand
    /// receives the adjoint on the extracted channel).
    #[inline]
    fn backward_scalar(&self, op: Op, out: f64, cv: f64, adj: &mut [Jet2]) {
        match op {
            Op::Leaf => {}
            Op::Add(a, b) => {
                adj[a as usize].v += cv;
                adj[b as usize].v += cv;
            }
            Op::Sub(a, b) => {
                adj[a as usize].v += cv;
                adj[b as usize].v -= cv;
            }
            Op::Mul(a, b) => {
                adj[a as usize].v += cv * self.val(b).v;
                adj[b as usize].v += cv * self.val(a).v;
            }
            Op::Div(a, b) => {
                let r = 1.0 / self.val(b).v;
                adj[a as usize].v += cv * r;
                adj[b as usize].v -= cv * self.val(a).v * r * r;
            }
            Op::Scale(a, k) => adj[a as usize].v += cv * k,
            Op::AddConst(a, _) => adj[a as usize].v += cv,
            Op::Field(a, f) => {
                let adj_a = &mut adj[a as usize];
                match f {
                    JetField::Val => adj_a.v += cv,
                    JetField::Dx => adj_a.dx += cv,
                    JetField::Dt => adj_a.dt += cv,
                    JetField::Dxx => adj_a.dxx += cv,
                    JetField::Dxt => adj_a.dxt += cv,
                    JetField::Dtt => adj_a.dtt += cv,
                }
            }
            Op::Linear { bias, start, len } => {
                adj[bias as usize].v += cv;
                for k in start as usize..(start + len) as usize {
                    let (w, x) = self.pool[k];
                    adj[w as usize].v += cv * self.val(x).v;
                    adj[x as usize].v += cv * self.val(w).v;
                }
            }
            unary => {
                let a = match unary {
                    Op::Neg(a)
                    | Op::Sin(a)
                    | Op::Cos(a)
                    | Op::Exp(a)
                    | Op::Tanh(a)
                    | Op::Ln(a)
                    | Op::Abs(a)
                    | Op::Recip(a)
                    | Op::Powi(a, _)
                    | Op::Powf(a, _) => a,
                    _ => unreachable!(),
                };
                let (f1, _, _) = unary_locals(unary, self.val(a).v, out);
                adj[a as usize].v += cv * f1;
            }
        }
    }

    #[inline]
    fn backward_full(&self, op: Op, out: f64, c: Jet2, adj: &mut [Jet2]) {
        match op {
            Op::Leaf => {}
            Op::Add(a, b) => {
                self.accumulate(adj, a, c);
                self.accumulate(adj, b, c);
            }
            Op::Sub(a, b) => {
                self.accumulate(adj, a, c);
                self.accumulate(adj, b, c.scale(-1.0));
            }
            Op::Mul(a, b) => {
                self.mul_backward(adj, a, b, c);
            }
            Op::Div(a, b) => {
                // c = a * r with r = 1/b; adjoints flow through both.
                let bv = self.val(b);
                let r = bv.recip();
                let mut a_adj = Jet2::default();
                mul_rev(&mut a_adj, c, r);
                self.deposit(adj, a, a_adj);
                let mut r_adj = Jet2::default();
                mul_rev(&mut r_adj, c, self.val(a));
                let iv = 1.0 / bv.v;
                let (f1, f2, f3) = (-iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv);
                let mut b_adj = Jet2::default();
                unary_rev(&mut b_adj, r_adj, bv, f1, f2, f3);
                self.deposit(adj, b, b_adj);
            }
            Op::Scale(a, k) => self.accumulate(adj, a, c.scale(k)),
            Op::AddConst(a, _) => self.accumulate(adj, a, c),
            Op::Field(..) => unreachable!("field outputs are zero-field nodes"),
            Op::Linear { bias, start, len } => {
                self.accumulate(adj, bias, c);
                for k in start as usize..(start + len) as usize {
                    let (w, x) = self.pool[k];
                    self.mul_backward(adj, w, x, c);
                }
            }
            unary => {
                let a = match unary {
                    Op::Neg(a)
                    | Op::Sin(a)
                    | Op::Cos(a)
                    | Op::Exp(a)
                    | Op::Tanh(a)
                    | Op::Ln(a)
                    | Op::Abs(a)
                    | Op::Recip(a)
                    | Op::Powi(a, _)
                    | Op::Powf(a, _) => a,
                    _ => unreachable!(),
                };
                let av = self.val(a);
                if let Op::Neg(_) = unary {
                    self.accumulate(adj, a, c.scale(-1.0));
                } else {
                    let (f1, f2, f3) = unary_locals(unary, av.v, out);
                    let mut a_adj = Jet2::default();
                    unary_rev(&mut a_adj, c, av, f1, f2, f3);
                    self.deposit(adj, a, a_adj);
                }
            }
        }
    }

    /// Adjoint of `out = a * b` into both operands, using the scalar rules
    /// for structurally zero-field operands.
    #[inline]
    fn mul_backward(&self, adj: &mut [Jet2], a: u32, b: u32, c: Jet2) {
        let (av, bv) = (self.val(a), self.val(b));
        match (self.is_zf(a), self.is_zf(b)) {
            (false, false) => {
                mul_rev(&mut adj[a as usize], c, bv);
                mul_rev(&mut adj[b as usize], c, av);
            }
            (true, false) => {
                // a is a constant: value adjoint only; b gets a scaled copy
                adj[a as usize].v += dot6(c, bv);
                add_assign(&mut adj[b as usize], c.scale(av.v));
            }
            (false, true) => {
                adj[b as usize].v += dot6(c, av);
                add_assign(&mut adj[a as usize], c.scale(bv.v));
            }
            (true, true) => {
                adj[a as usize].v += c.v * bv.v;
                adj[b as usize].v += c.v * av.v;
            }
        }
    }

    /// Accumulate a full adjoint into an operand, dropping derivative-field
    /// components for structurally zero-field operands (they are never read).
    #[inline]
    fn accumulate(&self, adj: &mut [Jet2], target: u32, c: Jet2) {
        if self.is_zf(target) {
            adj[target as usize].v += c.v;
        } else {
            add_assign(&mut adj[target as usize], c);
        }
    }

    #[inline]
    fn deposit(&self, adj: &mut [Jet2], target: u32, full: Jet2) {
        if self.is_zf(target) {
            adj[target as usize].v += full.v;
        } else {
            add_assign(&mut adj[target as usize], full);
        }
    }

    /// Re-evaluate every node from its operands. Returns the recomputed
    /// values; recording is deterministic, so these are bit-identical to the
    /// stored ones.
    pub fn replay(&self) -> Vec<Jet2> {
        let mut values: Vec<Jet2> = Vec::with_capacity(self.ops.len());
        for (idx, &op) in self.ops.iter().enumerate() {
            let v = |i: u32| values[i as usize];
            let out = match op {
                Op::Leaf => self.values[idx],
                Op::Add(a, b) => v(a) + v(b),
                Op::Sub(a, b) => v(a) - v(b),
                Op::Mul(a, b) => mul_value(v(a), self.is_zf(a), v(b), self.is_zf(b)),
                Op::Div(a, b) => {
                    if self.zf[idx] {
                        Jet2::constant(v(a).v / v(b).v)
                    } else {
                        v(a) * v(b).recip()
                    }
                }
                Op::Scale(a, k) => v(a).scale(k),
                Op::AddConst(a, k) => v(a).add_const(k),
                Op::Field(a, f) => Jet2::constant(v(a).field(f)),
                Op::Linear { bias, start, len } => {
                    let mut acc = v(bias);
                    for k in start as usize..(start + len) as usize {
                        let (w, x) = self.pool[k];
                        acc = acc + mul_value(v(w), self.is_zf(w), v(x), self.is_zf(x));
                    }
                    acc
                }
                unary => {
                    let a = match unary {
                        Op::Neg(a)
                        | Op::Sin(a)
                        | Op::Cos(a)
                        | Op::Exp(a)
                        | Op::Tanh(a)
                        | Op::Ln(a)
                        | Op::Abs(a)
                        | Op::Recip(a)
                        | Op::Powi(a, _)
                        | Op::Powf(a, _) => a,
                        _ => unreachable!(),
                    };
                    unary_value(unary, v(a), self.is_zf(a))
                }
            };
            values.push(out);
        }
        values
    }

    /// Stored node values in recording order (for replay comparisons).
    pub fn values(&self) -> impl Iterator<Item = Jet2> + '_ {
        self.values.iter().copied()
    }
}

#[inline]
fn add_assign(dst: &mut Jet2, s: Jet2) {
    dst.v += s.v;
    dst.dx += s.dx;
    dst.dt += s.dt;
    dst.dxx += s.dxx;
    dst.dxt += s.dxt;
    dst.dtt += s.dtt;
}

/// Six-field dot product: the value-channel row of the product-rule
/// transpose.
#[inline]
fn dot6(c: Jet2, b: Jet2) -> f64 {
    c.v * b.v + c.dx * b.dx + c.dt * b.dt + c.dxx * b.dxx + c.dxt * b.dxt + c.dtt * b.dtt
}

/// Adjoint of `c = a * b` into `a`, given the adjoint of `c` and the value of
/// the other operand. Transpose of the jet product rule.
#[inline]
fn mul_rev(dst: &mut Jet2, c: Jet2, b: Jet2) {
    dst.v += dot6(c, b);
    dst.dx += c.dx * b.v + 2.0 * c.dxx * b.dx + c.dxt * b.dt;
    dst.dt += c.dt * b.v + 2.0 * c.dtt * b.dt + c.dxt * b.dx;
    dst.dxx += c.dxx * b.v;
    dst.dxt += c.dxt * b.v;
    dst.dtt += c.dtt * b.v;
}

/// Adjoint of `c = f(a)` into `a`, given local derivatives `f1..f3` of the
/// primitive at `a.v`. Transpose of the unary chain rule on all six fields.
#[inline]
fn unary_rev(dst: &mut Jet2, c: Jet2, a: Jet2, f1: f64, f2: f64, f3: f64) {
    dst.v += c.v * f1
        + f2 * (c.dx * a.dx + c.dt * a.dt + c.dxx * a.dxx + c.dxt * a.dxt + c.dtt * a.dtt)
        + f3 * (c.dxx * a.dx * a.dx + c.dxt * a.dx * a.dt + c.dtt * a.dt * a.dt);
    dst.dx += c.dx * f1 + f2 * (2.0 * c.dxx * a.dx + c.dxt * a.dt);
    dst.dt += c.dt * f1 + f2 * (2.0 * c.dtt * a.dt + c.dxt * a.dx);
    dst.dxx += c.dxx * f1;
    dst.dxt += c.dxt * f1;
    dst.dtt += c.dtt * f1;
}
