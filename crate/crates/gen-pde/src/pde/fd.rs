//! Independent finite-difference reference solvers.
//!
//! These never share code with the closed-form or quadrature references;
//! they exist to cross-check them. All three use second-order central
//! differences in space: heat uses Crank–Nicolson, wave an explicit leapfrog
//! (exact on-grid at CFL = 1), Burgers Crank–Nicolson diffusion with an
//! explicit two-stage upwind-corrected convection term.

use super::grid::{linspace, GridMeta, SolutionGrid};
use super::{PdeProblem, ProblemId, ResidualKind};
use crate::error::{Error, Result};

/// Solve `problem` on an `nx x nt` grid over its training domain.
///
/// Grids that violate the scheme's stability constraint are rejected with
/// the required step bound in the message.
pub fn fd_reference(problem: &PdeProblem, nx: usize, nt: usize) -> Result<SolutionGrid> {
    if nx < 3 || nt < 3 {
        return Err(Error::Config(format!("fd grid too small: {nx} x {nt}")));
    }
    let d = problem.domain;
    let xs = linspace(d.x_lo, d.x_hi, nx);
    let ts = linspace(d.t_lo, d.t_hi, nt);
    let dx = xs[1] - xs[0];
    let dt = ts[1] - ts[0];

    let bc_lo = problem.bc_target_at(d.x_lo);
    let bc_hi = problem.bc_target_at(d.x_hi);
    let values = match problem.id {
        ProblemId::Heat => heat_crank_nicolson(problem, &xs, &ts, dx, dt, bc_lo, bc_hi),
        ProblemId::Wave => {
            let cfl = dt / dx;
            if cfl > 1.0 + 1e-9 {
                return Err(Error::Config(format!(
                    "wave leapfrog needs CFL = dt/dx <= 1: dt = {dt:.6e}, dx = {dx:.6e} \
                     (choose nt >= {})",
                    ((d.t_span() / dx).ceil() as usize) + 1
                )));
            }
            wave_leapfrog(problem, &xs, &ts, dx, dt, bc_lo, bc_hi)
        }
        ProblemId::Burgers => {
            // explicit convection with |u| <= 1 from the initial profile
            if dt > dx + 1e-12 {
                return Err(Error::Config(format!(
                    "burgers convection needs dt <= dx (|u| <= 1): dt = {dt:.6e}, dx = {dx:.6e} \
                     (choose nt >= {})",
                    ((d.t_span() / dx).ceil() as usize) + 1
                )));
            }
            let viscosity = match problem.residual.kind {
                ResidualKind::BurgersViscous { viscosity } => viscosity,
                _ => unreachable!("burgers problem carries a viscous residual"),
            };
            burgers_imex(problem, &xs, &ts, dx, dt, viscosity, bc_lo, bc_hi)
        }
    };

    let mut grid = SolutionGrid::new(
        xs,
        ts,
        values,
        GridMeta { model: format!("fd-{}", problem.name), domain: Some(d) },
    )?;
    grid.reference = None;
    Ok(grid)
}

/// Thomas tridiagonal solve with constant coefficients `(a, b, c)`.
fn thomas_const(a: f64, b: f64, c: f64, rhs: &[f64], out: &mut Vec<f64>, scratch: &mut Vec<f64>) {
    let n = rhs.len();
    out.clear();
    out.resize(n, 0.0);
    scratch.clear();
    scratch.resize(n, 0.0);
    let mut beta = b;
    out[0] = rhs[0] / beta;
    for i in 1..n {
        scratch[i] = c / beta;
        beta = b - a * scratch[i];
        out[i] = (rhs[i] - a * out[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        let next = out[i + 1];
        out[i] -= scratch[i + 1] * next;
    }
}

#[allow(clippy::too_many_arguments)]
fn heat_crank_nicolson(
    problem: &PdeProblem,
    xs: &[f64],
    ts: &[f64],
    dx: f64,
    dt: f64,
    bc_lo: impl Fn(f64) -> f64,
    bc_hi: impl Fn(f64) -> f64,
) -> Vec<f64> {
    let (nx, nt) = (xs.len(), ts.len());
    let r = dt / (2.0 * dx * dx);
    let mut u: Vec<f64> = xs.iter().map(|&x| (problem.ic)(x)).collect();
    let mut values = vec![0.0; nx * nt];
    store_column(&mut values, &u, 0, nt);

    let mut rhs = vec![0.0; nx - 2];
    let mut interior = Vec::new();
    let mut scratch = Vec::new();
    for (n, &t) in ts.iter().enumerate().skip(1) {
        for i in 1..nx - 1 {
            rhs[i - 1] = u[i] + r * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
        }
        let (lo, hi) = (bc_lo(t), bc_hi(t));
        rhs[0] += r * lo;
        rhs[nx - 3] += r * hi;
        thomas_const(-r, 1.0 + 2.0 * r, -r, &rhs, &mut interior, &mut scratch);
        u[0] = lo;
        u[nx - 1] = hi;
        u[1..nx - 1].copy_from_slice(&interior);
        store_column(&mut values, &u, n, nt);
    }
    values
}

#[allow(clippy::too_many_arguments)]
fn wave_leapfrog(
    problem: &PdeProblem,
    xs: &[f64],
    ts: &[f64],
    dx: f64,
    dt: f64,
    bc_lo: impl Fn(f64) -> f64,
    bc_hi: impl Fn(f64) -> f64,
) -> Vec<f64> {
    let (nx, nt) = (xs.len(), ts.len());
    let c2 = (dt / dx) * (dt / dx);
    let mut prev: Vec<f64> = xs.iter().map(|&x| (problem.ic)(x)).collect();
    let mut values = vec![0.0; nx * nt];
    store_column(&mut values, &prev, 0, nt);

    // first step with zero initial velocity
    let mut cur = prev.clone();
    for i in 1..nx - 1 {
        cur[i] = prev[i] + 0.5 * c2 * (prev[i + 1] - 2.0 * prev[i] + prev[i - 1]);
    }
    cur[0] = bc_lo(ts[1]);
    cur[nx - 1] = bc_hi(ts[1]);
    if nt > 1 {
        store_column(&mut values, &cur, 1, nt);
    }

    let mut next = vec![0.0; nx];
    for (n, &t) in ts.iter().enumerate().skip(2) {
        for i in 1..nx - 1 {
            next[i] = 2.0 * cur[i] - prev[i] + c2 * (cur[i + 1] - 2.0 * cur[i] + cur[i - 1]);
        }
        next[0] = bc_lo(t);
        next[nx - 1] = bc_hi(t);
        store_column(&mut values, &next, n, nt);
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    values
}

/// `u u_x` with a second-order upwind-biased one-sided stencil, centered
/// fallback next to the boundaries.
fn convection(u: &[f64], dx: f64, out: &mut [f64]) {
    let nx = u.len();
    out[0] = 0.0;
    out[nx - 1] = 0.0;
    for i in 1..nx - 1 {
        let ui = u[i];
        let ux = if ui > 0.0 && i >= 2 {
            (3.0 * u[i] - 4.0 * u[i - 1] + u[i - 2]) / (2.0 * dx)
        } else if ui <= 0.0 && i + 2 < nx {
            (-3.0 * u[i] + 4.0 * u[i + 1] - u[i + 2]) / (2.0 * dx)
        } else {
            (u[i + 1] - u[i - 1]) / (2.0 * dx)
        };
        out[i] = ui * ux;
    }
}

#[allow(clippy::too_many_arguments)]
fn burgers_imex(
    problem: &PdeProblem,
    xs: &[f64],
    ts: &[f64],
    dx: f64,
    dt: f64,
    viscosity: f64,
    bc_lo: impl Fn(f64) -> f64,
    bc_hi: impl Fn(f64) -> f64,
) -> Vec<f64> {
    let (nx, nt) = (xs.len(), ts.len());
    let r = viscosity * dt / (2.0 * dx * dx);
    let mut u: Vec<f64> = xs.iter().map(|&x| (problem.ic)(x)).collect();
    let mut values = vec![0.0; nx * nt];
    store_column(&mut values, &u, 0, nt);

    let mut conv0 = vec![0.0; nx];
    let mut conv1 = vec![0.0; nx];
    let mut star = vec![0.0; nx];
    let mut rhs = vec![0.0; nx - 2];
    let mut interior = Vec::new();
    let mut scratch = Vec::new();
    let d2 = |u: &[f64], i: usize| u[i + 1] - 2.0 * u[i] + u[i - 1];

    for (n, &t) in ts.iter().enumerate().skip(1) {
        convection(&u, dx, &mut conv0);
        // explicit predictor (diffusion explicit is stable: nu dt / dx^2 << 1)
        for i in 1..nx - 1 {
            star[i] = u[i] + dt * (viscosity * d2(&u, i) / (dx * dx) - conv0[i]);
        }
        star[0] = bc_lo(t);
        star[nx - 1] = bc_hi(t);
        convection(&star, dx, &mut conv1);
        for i in 1..nx - 1 {
            let conv_mid = 0.5 * (conv0[i] + conv1[i]);
            rhs[i - 1] = u[i] + r * d2(&u, i) - dt * conv_mid;
        }
        let (lo, hi) = (bc_lo(t), bc_hi(t));
        rhs[0] += r * lo;
        rhs[nx - 3] += r * hi;
        thomas_const(-r, 1.0 + 2.0 * r, -r, &rhs, &mut interior, &mut scratch);
        u[0] = lo;
        u[nx - 1] = hi;
        u[1..nx - 1].copy_from_slice(&interior);
        store_column(&mut values, &u, n, nt);
    }
    values
}

fn store_column(values: &mut [f64], u: &[f64], it: usize, nt: usize) {
    for (ix, &v) in u.iter().enumerate() {
        values[ix * nt + it] = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::reference::{cole_hopf_reference, dalembert, heat_exact};
    use crate::pde::{burgers_problem, heat_problem, wave_problem};

    #[test]
    fn heat_cn_converges_to_closed_form() {
        let problem = heat_problem();
        let grid = fd_reference(&problem, 201, 201).unwrap();
        let mut max_err: f64 = 0.0;
        for (ix, &x) in grid.xs.iter().enumerate() {
            for (it, &t) in grid.ts.iter().enumerate() {
                max_err = max_err.max((grid.value(ix, it) - heat_exact(x, t)).abs());
            }
        }
        assert!(max_err < 1e-3, "heat CN max error {max_err}");
    }

    #[test]
    fn wave_leapfrog_exact_at_unit_cfl() {
        let problem = wave_problem();
        // dx = dt = 2/200 -> CFL = 1
        let grid = fd_reference(&problem, 201, 201).unwrap();
        let mut max_err: f64 = 0.0;
        for (ix, &x) in grid.xs.iter().enumerate() {
            for (it, &t) in grid.ts.iter().enumerate() {
                max_err = max_err.max((grid.value(ix, it) - dalembert(x, t)).abs());
            }
        }
        assert!(max_err < 1e-6, "wave leapfrog on-grid error {max_err}");
    }

    #[test]
    fn wave_cfl_violation_reports_bound() {
        let problem = wave_problem();
        let err = fd_reference(&problem, 201, 101).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("CFL"), "{msg}");
        assert!(msg.contains("nt >="), "{msg}");
    }

    #[test]
    fn burgers_matches_cole_hopf_away_from_shock() {
        let problem = burgers_problem();
        let nu = crate::pde::reference::burgers_viscosity();
        let grid = fd_reference(&problem, 401, 2001).unwrap();
        // t = 0.5 is exactly on this grid
        let it = grid.nearest_time(0.5);
        assert!((grid.ts[it] - 0.5).abs() < 1e-12);
        let mut max_err: f64 = 0.0;
        for (ix, &x) in grid.xs.iter().enumerate() {
            if ix == 0 || ix + 1 == grid.nx() || x.abs() <= 0.05 {
                continue; // shock layer: both oracles lose accuracy here
            }
            let want = cole_hopf_reference(x, 0.5, nu).unwrap();
            max_err = max_err.max((grid.value(ix, it) - want).abs());
        }
        assert!(max_err < 1e-3, "burgers fd vs cole-hopf (away from shock): {max_err}");
    }

    #[test]
    fn burgers_cfl_violation_reports_bound() {
        let problem = burgers_problem();
        let err = fd_reference(&problem, 401, 101).unwrap_err();
        assert!(err.to_string().contains("dt <= dx"), "{err}");
    }
}
