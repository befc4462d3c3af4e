//! Second-order forward-mode jets over the two inputs `(x, t)`.
//!
//! A [`Jet2`] carries a value together with its first and second partial
//! derivatives with respect to the spatial coordinate `x` and the temporal
//! coordinate `t`. Arithmetic on jets propagates all six fields by the exact
//! Taylor rules, so evaluating a model on seeded jets yields `u`, `u_x`,
//! `u_t`, `u_xx`, `u_xt`, `u_tt` in a single pass.

use crate::error::Error;

/// Argument above which `exp` is clamped to a flat extension instead of
/// overflowing to infinity. Contexts that record computations count these
/// events as warnings.
pub const EXP_CLAMP: f64 = 700.0;

/// Denominators smaller than this in magnitude are rejected by checked
/// division.
pub const DIV_GUARD: f64 = 1e-12;

/// The six derivative channels of a [`Jet2`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetField {
    /// Function value.
    Val,
    /// First partial with respect to `x`.
    Dx,
    /// First partial with respect to `t`.
    Dt,
    /// Second partial with respect to `x`.
    Dxx,
    /// Mixed second partial.
    Dxt,
    /// Second partial with respect to `t`.
    Dtt,
}

/// A scalar with exact first and second partials with respect to `(x, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Jet2 {
    pub v: f64,
    pub dx: f64,
    pub dt: f64,
    pub dxx: f64,
    pub dxt: f64,
    pub dtt: f64,
}

/// Lift the point `(x, t)` into seeded jets: the x-jet has `dx = 1`, the
/// t-jet has `dt = 1`, and every other derivative field is zero.
pub fn jet_seed(x: f64, t: f64) -> (Jet2, Jet2) {
    (Jet2::seed_x(x), Jet2::seed_t(t))
}

impl Jet2 {
    pub fn constant(v: f64) -> Self {
        Jet2 { v, ..Default::default() }
    }

    pub fn seed_x(x: f64) -> Self {
        Jet2 { v: x, dx: 1.0, ..Default::default() }
    }

    pub fn seed_t(t: f64) -> Self {
        Jet2 { v: t, dt: 1.0, ..Default::default() }
    }

    pub fn field(&self, f: JetField) -> f64 {
        match f {
            JetField::Val => self.v,
            JetField::Dx => self.dx,
            JetField::Dt => self.dt,
            JetField::Dxx => self.dxx,
            JetField::Dxt => self.dxt,
            JetField::Dtt => self.dtt,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite()
            && self.dx.is_finite()
            && self.dt.is_finite()
            && self.dxx.is_finite()
            && self.dxt.is_finite()
            && self.dtt.is_finite()
    }

    /// Chain rule for a unary primitive with local derivatives `f1 = f'(v)`
    /// and `f2 = f''(v)` at the current value, returning `f(self)`.
    #[inline]
    pub fn apply_unary(self, f0: f64, f1: f64, f2: f64) -> Self {
        Jet2 {
            v: f0,
            dx: f1 * self.dx,
            dt: f1 * self.dt,
            dxx: f1 * self.dxx + f2 * self.dx * self.dx,
            dxt: f1 * self.dxt + f2 * self.dx * self.dt,
            dtt: f1 * self.dtt + f2 * self.dt * self.dt,
        }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.apply_unary(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.apply_unary(c, -s, -c)
    }

    /// Exponential with the overflow clamp: arguments above [`EXP_CLAMP`]
    /// evaluate to a flat `exp(EXP_CLAMP)` with zero derivatives.
    pub fn exp(self) -> Self {
        if self.v > EXP_CLAMP {
            Jet2::constant(EXP_CLAMP.exp())
        } else {
            let e = self.v.exp();
            self.apply_unary(e, e, e)
        }
    }

    pub fn tanh(self) -> Self {
        let y = self.v.tanh();
        let s = 1.0 - y * y;
        self.apply_unary(y, s, -2.0 * y * s)
    }

    pub fn ln(self) -> Self {
        let r = 1.0 / self.v;
        self.apply_unary(self.v.ln(), r, -r * r)
    }

    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        let f1 = 0.5 / r;
        self.apply_unary(r, f1, -0.5 * f1 / self.v)
    }

    pub fn abs(self) -> Self {
        let s = if self.v < 0.0 { -1.0 } else { 1.0 };
        self.apply_unary(self.v.abs(), s, 0.0)
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.apply_unary(r, -r * r, 2.0 * r * r * r)
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Jet2::constant(1.0),
            1 => self,
            _ => {
                let nf = f64::from(n);
                let f0 = self.v.powi(n);
                let f1 = nf * self.v.powi(n - 1);
                let f2 = nf * (nf - 1.0) * self.v.powi(n - 2);
                self.apply_unary(f0, f1, f2)
            }
        }
    }

    /// Real power; the base must be positive.
    pub fn powf(self, p: f64) -> Self {
        let f0 = self.v.powf(p);
        let f1 = p * self.v.powf(p - 1.0);
        let f2 = p * (p - 1.0) * self.v.powf(p - 2.0);
        self.apply_unary(f0, f1, f2)
    }

    pub fn scale(self, k: f64) -> Self {
        Jet2 {
            v: k * self.v,
            dx: k * self.dx,
            dt: k * self.dt,
            dxx: k * self.dxx,
            dxt: k * self.dxt,
            dtt: k * self.dtt,
        }
    }

    /// Shift the value channel only; derivatives of a constant are zero.
    pub fn add_const(self, k: f64) -> Self {
        Jet2 { v: self.v + k, ..self }
    }

    /// Division with the near-zero denominator guard from the module
    /// contract; the error carries the offending operand value.
    pub fn checked_div(self, rhs: Jet2) -> Result<Jet2, Error> {
        if rhs.v.abs() <= DIV_GUARD {
            return Err(Error::DivisionByNearZero { operand: rhs.v });
        }
        Ok(self * rhs.recip())
    }
}

impl std::ops::Add for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + rhs.v,
            dx: self.dx + rhs.dx,
            dt: self.dt + rhs.dt,
            dxx: self.dxx + rhs.dxx,
            dxt: self.dxt + rhs.dxt,
            dtt: self.dtt + rhs.dtt,
        }
    }
}

impl std::ops::Sub for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            v: self.v - rhs.v,
            dx: self.dx - rhs.dx,
            dt: self.dt - rhs.dt,
            dxx: self.dxx - rhs.dxx,
            dxt: self.dxt - rhs.dxt,
            dtt: self.dtt - rhs.dtt,
        }
    }
}

impl std::ops::Mul for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * rhs.v,
            dx: self.dx * rhs.v + self.v * rhs.dx,
            dt: self.dt * rhs.v + self.v * rhs.dt,
            dxx: self.dxx * rhs.v + 2.0 * self.dx * rhs.dx + self.v * rhs.dxx,
            dxt: self.dxt * rhs.v + self.dx * rhs.dt + self.dt * rhs.dx + self.v * rhs.dxt,
            dtt: self.dtt * rhs.v + 2.0 * self.dt * rhs.dt + self.v * rhs.dtt,
        }
    }
}

/// Unchecked division; callers guard the denominator (see `checked_div`).
impl std::ops::Div for Jet2 {
    type Output = Jet2;
    #[inline]
    fn div(self, rhs: Jet2) -> Jet2 {
        self * rhs.recip()
    }
}

impl std::ops::Neg for Jet2 {
    type Output = Jet2;
    #[inline]
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

/// Operation kinds accepted by [`jet_op`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetOpKind {
    Add,
    Sub,
    Mul,
    Div,
    Sin,
    Cos,
    Exp,
    Tanh,
    Pow,
    Neg,
}

/// Kind-dispatched jet arithmetic. Binary kinds require `b`; `Pow` treats a
/// constant exponent (all derivative fields zero) as a real power and
/// otherwise evaluates `exp(b ln a)`, which requires `a > 0`.
pub fn jet_op(kind: JetOpKind, a: Jet2, b: Option<Jet2>) -> Result<Jet2, Error> {
    let operand = |b: Option<Jet2>| b.ok_or(Error::MissingOperand);
    Ok(match kind {
        JetOpKind::Add => a + operand(b)?,
        JetOpKind::Sub => a - operand(b)?,
        JetOpKind::Mul => a * operand(b)?,
        JetOpKind::Div => a.checked_div(operand(b)?)?,
        JetOpKind::Sin => a.sin(),
        JetOpKind::Cos => a.cos(),
        JetOpKind::Exp => a.exp(),
        JetOpKind::Tanh => a.tanh(),
        JetOpKind::Neg => -a,
        JetOpKind::Pow => {
            let e = operand(b)?;
            let exponent_is_const =
                e.dx == 0.0 && e.dt == 0.0 && e.dxx == 0.0 && e.dxt == 0.0 && e.dtt == 0.0;
            if exponent_is_const {
                a.powf(e.v)
            } else if a.v > 0.0 {
                (e * a.ln()).exp()
            } else {
                return Err(Error::DivisionByNearZero { operand: a.v });
            }
        }
    })
}
