//! Evaluation contexts: the same model code runs either recorded on a tape
//! (for parameter gradients) or directly on jets (for cheap grid evaluation).

use super::jet::{Jet2, JetField, EXP_CLAMP};
use super::tape::{Tape, Var};

/// Abstraction over jet-valued evaluation. Model, basis and residual code is
/// written once against this trait; `TapeCtx` records every operation for the
/// reverse sweep while `DirectCtx` just propagates jets.
///
/// `div` and `recip` are unguarded here — callers are responsible for keeping
/// denominators away from zero (basis code does so by construction through
/// the `|sigma| + 1e-6` reparameterization). The guarded entry points live on
/// [`Jet2`] and [`Tape`] directly.
pub trait JetCtx {
    type V: Copy;

    fn constant(&mut self, c: f64) -> Self::V;
    /// The `i`-th trainable parameter as a constant jet (gradients flow to it
    /// on recording contexts).
    fn param(&mut self, i: usize) -> Self::V;
    /// Seeded input jets for a point.
    fn inputs(&mut self, x: f64, t: f64) -> (Self::V, Self::V);
    /// Inject an externally computed jet (no gradient source).
    fn raw_jet(&mut self, jet: Jet2) -> Self::V;

    fn add(&mut self, a: Self::V, b: Self::V) -> Self::V;
    fn sub(&mut self, a: Self::V, b: Self::V) -> Self::V;
    fn mul(&mut self, a: Self::V, b: Self::V) -> Self::V;
    fn div(&mut self, a: Self::V, b: Self::V) -> Self::V;
    fn neg(&mut self, a: Self::V) -> Self::V;
    fn sin(&mut self, a: Self::V) -> Self::V;
    fn cos(&mut self, a: Self::V) -> Self::V;
    fn exp(&mut self, a: Self::V) -> Self::V;
    fn tanh(&mut self, a: Self::V) -> Self::V;
    fn abs(&mut self, a: Self::V) -> Self::V;
    fn recip(&mut self, a: Self::V) -> Self::V;
    fn powi(&mut self, a: Self::V, n: i32) -> Self::V;
    fn scale(&mut self, a: Self::V, k: f64) -> Self::V;
    fn add_const(&mut self, a: Self::V, k: f64) -> Self::V;
    fn field(&mut self, a: Self::V, f: JetField) -> Self::V;
    fn linear(&mut self, bias: Self::V, terms: &[(Self::V, Self::V)]) -> Self::V;

    fn value(&self, a: Self::V) -> Jet2;
}

/// Recording context: parameters resolve to the tape's leaf block.
pub struct TapeCtx<'t> {
    pub tape: &'t mut Tape,
    pub params: &'t [Var],
}

impl<'t> TapeCtx<'t> {
    pub fn new(tape: &'t mut Tape, params: &'t [Var]) -> Self {
        TapeCtx { tape, params }
    }
}

impl JetCtx for TapeCtx<'_> {
    type V = Var;

    fn constant(&mut self, c: f64) -> Var {
        self.tape.constant(c)
    }
    fn param(&mut self, i: usize) -> Var {
        self.params[i]
    }
    fn inputs(&mut self, x: f64, t: f64) -> (Var, Var) {
        self.tape.seed_inputs(x, t)
    }
    fn raw_jet(&mut self, jet: Jet2) -> Var {
        self.tape.raw_jet(jet)
    }
    fn add(&mut self, a: Var, b: Var) -> Var {
        self.tape.add(a, b)
    }
    fn sub(&mut self, a: Var, b: Var) -> Var {
        self.tape.sub(a, b)
    }
    fn mul(&mut self, a: Var, b: Var) -> Var {
        self.tape.mul(a, b)
    }
    fn div(&mut self, a: Var, b: Var) -> Var {
        let r = self.tape.recip(b);
        self.tape.mul(a, r)
    }
    fn neg(&mut self, a: Var) -> Var {
        self.tape.neg(a)
    }
    fn sin(&mut self, a: Var) -> Var {
        self.tape.sin(a)
    }
    fn cos(&mut self, a: Var) -> Var {
        self.tape.cos(a)
    }
    fn exp(&mut self, a: Var) -> Var {
        self.tape.exp(a)
    }
    fn tanh(&mut self, a: Var) -> Var {
        self.tape.tanh(a)
    }
    fn abs(&mut self, a: Var) -> Var {
        self.tape.abs(a)
    }
    fn recip(&mut self, a: Var) -> Var {
        self.tape.recip(a)
    }
    fn powi(&mut self, a: Var, n: i32) -> Var {
        self.tape.powi(a, n)
    }
    fn scale(&mut self, a: Var, k: f64) -> Var {
        self.tape.scale(a, k)
    }
    fn add_const(&mut self, a: Var, k: f64) -> Var {
        self.tape.add_const(a, k)
    }
    fn field(&mut self, a: Var, f: JetField) -> Var {
        self.tape.field(a, f)
    }
    fn linear(&mut self, bias: Var, terms: &[(Var, Var)]) -> Var {
        self.tape.linear(bias, terms)
    }
    fn value(&self, a: Var) -> Jet2 {
        self.tape.value(a)
    }
}

/// Direct context: plain jet propagation over a parameter slice. Used for
/// grid evaluation where no gradients are needed.
pub struct DirectCtx<'p> {
    pub params: &'p [f64],
    pub exp_clamps: usize,
}

impl<'p> DirectCtx<'p> {
    pub fn new(params: &'p [f64]) -> Self {
        DirectCtx { params, exp_clamps: 0 }
    }
}

impl JetCtx for DirectCtx<'_> {
    type V = Jet2;

    fn constant(&mut self, c: f64) -> Jet2 {
        Jet2::constant(c)
    }
    fn param(&mut self, i: usize) -> Jet2 {
        Jet2::constant(self.params[i])
    }
    fn inputs(&mut self, x: f64, t: f64) -> (Jet2, Jet2) {
        (Jet2::seed_x(x), Jet2::seed_t(t))
    }
    fn raw_jet(&mut self, jet: Jet2) -> Jet2 {
        jet
    }
    fn add(&mut self, a: Jet2, b: Jet2) -> Jet2 {
        a + b
    }
    fn sub(&mut self, a: Jet2, b: Jet2) -> Jet2 {
        a - b
    }
    fn mul(&mut self, a: Jet2, b: Jet2) -> Jet2 {
        a * b
    }
    fn div(&mut self, a: Jet2, b: Jet2) -> Jet2 {
        a / b
    }
    fn neg(&mut self, a: Jet2) -> Jet2 {
        -a
    }
    fn sin(&mut self, a: Jet2) -> Jet2 {
        a.sin()
    }
    fn cos(&mut self, a: Jet2) -> Jet2 {
        a.cos()
    }
    fn exp(&mut self, a: Jet2) -> Jet2 {
        if a.v > EXP_CLAMP {
            self.exp_clamps += 1;
        }
        a.exp()
    }
    fn tanh(&mut self, a: Jet2) -> Jet2 {
        a.tanh()
    }
    fn abs(&mut self, a: Jet2) -> Jet2 {
        a.abs()
    }
    fn recip(&mut self, a: Jet2) -> Jet2 {
        a.recip()
    }
    fn powi(&mut self, a: Jet2, n: i32) -> Jet2 {
        a.powi(n)
    }
    fn scale(&mut self, a: Jet2, k: f64) -> Jet2 {
        a.scale(k)
    }
    fn add_const(&mut self, a: Jet2, k: f64) -> Jet2 {
        a.add_const(k)
    }
    fn field(&mut self, a: Jet2, f: JetField) -> Jet2 {
        Jet2::constant(a.field(f))
    }
    fn linear(&mut self, bias: Jet2, terms: &[(Jet2, Jet2)]) -> Jet2 {
        let mut acc = bias;
        for &(w, x) in terms {
            acc = acc + w * x;
        }
        acc
    }
    fn value(&self, a: Jet2) -> Jet2 {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The two contexts agree on a mixed composition.
    #[test]
    fn tape_and_direct_agree() {
        let params = [0.4, -1.1, 0.9];
        let build = |ctx: &mut dyn FnMut() -> Jet2| ctx();
        let _ = build;

        fn run<C: JetCtx>(ctx: &mut C) -> Jet2 {
            let (x, t) = ctx.inputs(0.8, 0.3);
            let p0 = ctx.param(0);
            let p1 = ctx.param(1);
            let p2 = ctx.param(2);
            let a = ctx.mul(p0, x);
            let b = ctx.sin(a);
            let c = ctx.mul(p1, t);
            let d = ctx.exp(c);
            let e = ctx.linear(p2, &[(p0, b), (p1, d)]);
            let f = ctx.tanh(e);
            let g = ctx.field(f, JetField::Dxx);
            let h = ctx.add(f, g);
            ctx.value(h)
        }

        let mut tape = Tape::new();
        let vars = tape.alloc_params(&params);
        let mut tctx = TapeCtx::new(&mut tape, &vars);
        let via_tape = run(&mut tctx);
        let mut dctx = DirectCtx::new(&params);
        let via_direct = run(&mut dctx);
        assert!((via_tape.v - via_direct.v).abs() < 1e-15);
        assert!((via_tape.dxx - via_direct.dxx).abs() < 1e-15);
        assert!((via_tape.dxt - via_direct.dxt).abs() < 1e-15);
    }
}
