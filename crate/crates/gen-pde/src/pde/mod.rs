//! Benchmark problem definitions: residual operators, boundary and initial
//! conditions, domains, and reference solutions.

mod fd;
mod grid;
pub mod quadrature;
pub mod reference;

pub use fd::fd_reference;
pub use grid::{linspace, GridMeta, SolutionGrid};
pub use reference::{
    burgers_initial, burgers_viscosity, cole_hopf_reference, dalembert, heat_exact,
    heat_exact_jet, wave_initial, Reference, COLE_HOPF_BASE_NODES,
};

use crate::autodiff::{JetCtx, JetField};
use crate::domain::DomainBox;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemId {
    Heat,
    Wave,
    Burgers,
}

impl ProblemId {
    pub fn problem(self) -> PdeProblem {
        match self {
            ProblemId::Heat => heat_problem(),
            ProblemId::Wave => wave_problem(),
            ProblemId::Burgers => burgers_problem(),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            ProblemId::Heat => "heat",
            ProblemId::Wave => "wave",
            ProblemId::Burgers => "burgers",
        }
    }
}

/// Differential operator applied to the solution jet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResidualKind {
    /// `u_t - u_xx`
    HeatUtMinusUxx,
    /// `u_tt - u_xx`
    WaveUttMinusUxx,
    /// `u_t + u u_x - viscosity u_xx`
    BurgersViscous { viscosity: f64 },
}

/// Residual operator with an optional source hook `f(x, t)` (none of the
/// benchmarks use one; the residual becomes `N[u] - f`).
#[derive(Clone, Copy, Debug)]
pub struct Residual {
    pub kind: ResidualKind,
    pub source: Option<fn(f64, f64) -> f64>,
}

impl Residual {
    /// Build the residual of `u` at `(x, t)` in the given context. On a
    /// recording context this keeps the residual differentiable with respect
    /// to every parameter feeding `u`.
    pub fn apply<C: JetCtx>(&self, ctx: &mut C, u: C::V, x: f64, t: f64) -> C::V {
        let r = match self.kind {
            ResidualKind::HeatUtMinusUxx => {
                let ut = ctx.field(u, JetField::Dt);
                let uxx = ctx.field(u, JetField::Dxx);
                ctx.sub(ut, uxx)
            }
            ResidualKind::WaveUttMinusUxx => {
                let utt = ctx.field(u, JetField::Dtt);
                let uxx = ctx.field(u, JetField::Dxx);
                ctx.sub(utt, uxx)
            }
            ResidualKind::BurgersViscous { viscosity } => {
                let ut = ctx.field(u, JetField::Dt);
                let uv = ctx.field(u, JetField::Val);
                let ux = ctx.field(u, JetField::Dx);
                let uxx = ctx.field(u, JetField::Dxx);
                let conv = ctx.mul(uv, ux);
                let adv = ctx.add(ut, conv);
                let diff = ctx.scale(uxx, viscosity);
                ctx.sub(adv, diff)
            }
        };
        match self.source {
            Some(f) => ctx.add_const(r, -f(x, t)),
            None => r,
        }
    }
}

/// Which edge of the spatial interval a boundary condition lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryLocus {
    XLow,
    XHigh,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundaryCondition {
    pub locus: BoundaryLocus,
    /// Target `b(x, t)` on the locus.
    pub target: fn(f64, f64) -> f64,
}

/// Fixed evaluation loci for profile exports.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum ProfileLocus {
    /// Profile over `t` at fixed `x`.
    FixedX(f64),
    /// Profile over `x` at fixed `t`.
    FixedT(f64),
}

/// A benchmark problem: residual operator, boundary/initial specification,
/// domain box, and reference-solution handle.
#[derive(Clone, Debug)]
pub struct PdeProblem {
    pub id: ProblemId,
    pub name: &'static str,
    pub domain: DomainBox,
    /// Strictly contains `domain`; where extrapolation is measured.
    pub extrapolation: DomainBox,
    pub residual: Residual,
    pub bc: Vec<BoundaryCondition>,
    pub ic: fn(f64) -> f64,
    pub reference: Reference,
}

impl PdeProblem {
    pub fn boundary_x(&self, locus: BoundaryLocus) -> f64 {
        match locus {
            BoundaryLocus::XLow => self.domain.x_lo,
            BoundaryLocus::XHigh => self.domain.x_hi,
        }
    }

    pub(crate) fn bc_target_at(&self, x: f64) -> impl Fn(f64) -> f64 + '_ {
        let cond = self
            .bc
            .iter()
            .find(|c| (self.boundary_x(c.locus) - x).abs() < 1e-12)
            .expect("boundary condition exists for locus");
        move |t: f64| (cond.target)(x, t)
    }

    /// Override the extrapolation box (it must still contain the domain).
    pub fn with_extrapolation(mut self, bx: DomainBox) -> crate::error::Result<Self> {
        if bx.x_lo > self.domain.x_lo
            || bx.x_hi < self.domain.x_hi
            || bx.t_lo > self.domain.t_lo
            || bx.t_hi < self.domain.t_hi
        {
            return Err(crate::error::Error::Config(
                "extrapolation box must contain the training domain".into(),
            ));
        }
        self.extrapolation = bx;
        Ok(self)
    }

    /// Fixed profile loci reported by model comparisons.
    pub fn profile_loci(&self) -> Vec<ProfileLocus> {
        match self.id {
            ProblemId::Heat => vec![ProfileLocus::FixedX(0.5), ProfileLocus::FixedX(1.0)],
            ProblemId::Wave => vec![ProfileLocus::FixedX(0.5), ProfileLocus::FixedX(3.0)],
            ProblemId::Burgers => vec![
                ProfileLocus::FixedT(0.25),
                ProfileLocus::FixedT(0.5),
                ProfileLocus::FixedT(0.75),
            ],
        }
    }
}

fn zero(_x: f64, _t: f64) -> f64 {
    0.0
}

/// Heat benchmark: `u_t = u_xx` on `[0,2] x [0,2]`, `u(x,0) = sin(pi x / 2)`,
/// zero Dirichlet boundaries; extrapolation doubles the time horizon.
pub fn heat_problem() -> PdeProblem {
    PdeProblem {
        id: ProblemId::Heat,
        name: "heat",
        domain: DomainBox::new(0.0, 2.0, 0.0, 2.0).unwrap(),
        extrapolation: DomainBox::new(0.0, 2.0, 0.0, 4.0).unwrap(),
        residual: Residual { kind: ResidualKind::HeatUtMinusUxx, source: None },
        bc: vec![
            BoundaryCondition { locus: BoundaryLocus::XLow, target: zero },
            BoundaryCondition { locus: BoundaryLocus::XHigh, target: zero },
        ],
        ic: |x| (std::f64::consts::FRAC_PI_2 * x).sin(),
        reference: Reference::Heat,
    }
}

/// Wave benchmark: `u_tt = u_xx` on `[0,2] x [0,2]` with the triangle initial
/// profile, zero initial velocity and zero Dirichlet boundaries;
/// extrapolation extends to `[0,4] x [0,4]`.
pub fn wave_problem() -> PdeProblem {
    PdeProblem {
        id: ProblemId::Wave,
        name: "wave",
        domain: DomainBox::new(0.0, 2.0, 0.0, 2.0).unwrap(),
        extrapolation: DomainBox::new(0.0, 4.0, 0.0, 4.0).unwrap(),
        residual: Residual { kind: ResidualKind::WaveUttMinusUxx, source: None },
        bc: vec![
            BoundaryCondition { locus: BoundaryLocus::XLow, target: zero },
            BoundaryCondition { locus: BoundaryLocus::XHigh, target: zero },
        ],
        ic: wave_initial,
        reference: Reference::Wave,
    }
}

/// Burgers benchmark: `u_t + u u_x = (0.01/pi) u_xx` on `[-1,1] x [0,1]`,
/// `u(x,0) = -sin(pi x)`, zero Dirichlet boundaries; extrapolation extends
/// the horizon to `t = 1.5`.
pub fn burgers_problem() -> PdeProblem {
    PdeProblem {
        id: ProblemId::Burgers,
        name: "burgers",
        domain: DomainBox::new(-1.0, 1.0, 0.0, 1.0).unwrap(),
        extrapolation: DomainBox::new(-1.0, 1.0, 0.0, 1.5).unwrap(),
        residual: Residual {
            kind: ResidualKind::BurgersViscous { viscosity: burgers_viscosity() },
            source: None,
        },
        bc: vec![
            BoundaryCondition { locus: BoundaryLocus::XLow, target: zero },
            BoundaryCondition { locus: BoundaryLocus::XHigh, target: zero },
        ],
        ic: burgers_initial,
        reference: Reference::Burgers {
            viscosity: burgers_viscosity(),
            base_nodes: COLE_HOPF_BASE_NODES,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autodiff::DirectCtx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Residual of each reference solution, evaluated through jets, vanishes
    /// at random interior points.
    #[test]
    fn references_satisfy_their_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for problem in [heat_problem(), wave_problem()] {
            for _ in 0..300 {
                let x = rng.random_range(problem.domain.x_lo..problem.domain.x_hi);
                let t = rng.random_range(0.01..problem.domain.t_hi);
                let jet = problem.reference.jet(x, t);
                let mut ctx = DirectCtx::new(&[]);
                let u = ctx.raw_jet(jet);
                let r = problem.residual.apply(&mut ctx, u, x, t);
                assert!(
                    r.v.abs() < 1e-8,
                    "{} residual {} at ({x}, {t})",
                    problem.name,
                    r.v
                );
            }
        }
        // Burgers: quadrature-exact jets; keep clear of the shock layer where
        // the integrand peaks sharpen.
        let problem = burgers_problem();
        for _ in 0..120 {
            let x: f64 = rng.random_range(-0.95..0.95);
            if x.abs() < 0.15 {
                continue;
            }
            let t = rng.random_range(0.05..0.95);
            let jet = problem.reference.jet(x, t);
            let mut ctx = DirectCtx::new(&[]);
            let u = ctx.raw_jet(jet);
            let r = problem.residual.apply(&mut ctx, u, x, t);
            assert!(r.v.abs() < 1e-4, "burgers residual {} at ({x}, {t})", r.v);
        }
    }

    #[test]
    fn bc_and_ic_agree_with_references() {
        for problem in [heat_problem(), wave_problem(), burgers_problem()] {
            for cond in &problem.bc {
                let x = problem.boundary_x(cond.locus);
                for i in 0..50 {
                    let t = problem.domain.t_hi * i as f64 / 49.0;
                    let target = (cond.target)(x, t);
                    let reference = problem.reference.value(x, t);
                    assert!(
                        (target - reference).abs() < 1e-7,
                        "{}: bc target {target} vs reference {reference} at ({x}, {t})",
                        problem.name
                    );
                }
            }
            for i in 0..50 {
                let x = problem.domain.x_lo + problem.domain.x_span() * i as f64 / 49.0;
                let target = (problem.ic)(x);
                let reference = problem.reference.value(x, 0.0);
                assert!(
                    (target - reference).abs() < 1e-12,
                    "{}: ic target {target} vs reference {reference} at x = {x}",
                    problem.name
                );
            }
        }
    }

    #[test]
    fn heat_spot_checks_from_definition() {
        let p = heat_problem();
        assert!((p.reference.value(1.0, 0.0) - 1.0).abs() < 1e-15);
        assert!(p.reference.value(0.0, 0.7).abs() < 1e-15);
        assert!((p.reference.value(1.0, 1.0) - 0.084_804_972_471_113_78).abs() < 1e-15);
    }

    #[test]
    fn wave_spot_checks_from_definition() {
        let p = wave_problem();
        assert!((p.reference.value(1.0, 0.0) - 0.5).abs() < 1e-15);
        assert!(p.reference.value(1.0, 1.0).abs() < 1e-15);
        assert!((p.reference.value(1.0, 2.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn burgers_spot_checks_from_definition() {
        let p = burgers_problem();
        assert!((p.reference.value(0.5, 0.0) + 1.0).abs() < 1e-15);
        assert_eq!(p.reference.value(0.0, 0.4), 0.0);
        assert!(p.reference.value(1.0, 0.3).abs() < 1e-9);
        assert!(p.reference.value(-1.0, 0.3).abs() < 1e-9);
    }

    #[test]
    fn extrapolation_override_must_contain_domain() {
        let p = heat_problem();
        assert!(p
            .clone()
            .with_extrapolation(DomainBox::new(0.0, 2.0, 0.0, 6.0).unwrap())
            .is_ok());
        assert!(p
            .with_extrapolation(DomainBox::new(0.5, 2.0, 0.0, 6.0).unwrap())
            .is_err());
    }
}
