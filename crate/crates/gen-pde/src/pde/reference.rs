//! Reference solutions for the three benchmark problems.

use std::f64::consts::{FRAC_PI_2, PI};

use super::quadrature::gauss_hermite;
use super::ProblemId;
use crate::autodiff::Jet2;
use crate::error::{Error, Result};

/// Default Burgers viscosity, `0.01 / pi`.
pub fn burgers_viscosity() -> f64 {
    0.01 / PI
}

/// Base quadrature size for the Cole–Hopf integral; doubled automatically
/// until two successive sizes agree to 1e-6 (capped at 512, above which the
/// unscaled Hermite recurrence would overflow).
pub const COLE_HOPF_BASE_NODES: usize = 128;
const COLE_HOPF_MAX_NODES: usize = 512;
const COLE_HOPF_AGREE: f64 = 1e-6;

/// Handle to a problem's exact (or quadrature-exact) solution.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Reference {
    /// `u = e^{-(pi/2)^2 t} sin(pi x / 2)`
    Heat,
    /// d'Alembert from the odd, 4-periodic extension of the triangle profile,
    /// zero initial velocity.
    Wave,
    /// Cole–Hopf integral solution evaluated by Gauss–Hermite quadrature.
    Burgers { viscosity: f64, base_nodes: usize },
}

impl Reference {
    pub fn for_problem(id: ProblemId) -> Reference {
        match id {
            ProblemId::Heat => Reference::Heat,
            ProblemId::Wave => Reference::Wave,
            ProblemId::Burgers => Reference::Burgers {
                viscosity: burgers_viscosity(),
                base_nodes: COLE_HOPF_BASE_NODES,
            },
        }
    }

    /// Solution value at a point. Evaluation is unrestricted: extrapolation
    /// regions use the same closed forms. Returns NaN if a quadrature fails.
    pub fn value(&self, x: f64, t: f64) -> f64 {
        match *self {
            Reference::Heat => heat_exact(x, t),
            Reference::Wave => dalembert(x, t),
            Reference::Burgers { viscosity, base_nodes } => {
                cole_hopf_adaptive(x, t, viscosity, base_nodes).unwrap_or(f64::NAN)
            }
        }
    }

    /// Solution jet at a point. For the Burgers reference `t` must be
    /// positive: the quadrature kernel degenerates at `t = 0`.
    pub fn jet(&self, x: f64, t: f64) -> Jet2 {
        match *self {
            Reference::Heat => heat_exact_jet(x, t),
            Reference::Wave => dalembert_jet(x, t),
            Reference::Burgers { viscosity, base_nodes } => {
                debug_assert!(t > 0.0, "Burgers reference jet needs t > 0");
                cole_hopf_jet(x, t, viscosity, base_nodes.max(COLE_HOPF_BASE_NODES))
            }
        }
    }
}

/// Heat closed form as plain arithmetic.
pub fn heat_exact(x: f64, t: f64) -> f64 {
    (-FRAC_PI_2 * FRAC_PI_2 * t).exp() * (FRAC_PI_2 * x).sin()
}

/// Heat closed form propagated through jets.
pub fn heat_exact_jet(x: f64, t: f64) -> Jet2 {
    let (xj, tj) = crate::autodiff::jet_seed(x, t);
    tj.scale(-FRAC_PI_2 * FRAC_PI_2).exp() * xj.scale(FRAC_PI_2).sin()
}

/// Triangle initial profile on `[0, 2]`: `x/2` below 1, `1 - x/2` above.
pub fn wave_initial(x: f64) -> f64 {
    if x < 1.0 {
        x / 2.0
    } else {
        1.0 - x / 2.0
    }
}

/// Odd, 4-periodic extension of the triangle profile and its slope. The
/// second derivative is zero away from the (measure-zero) kink lines.
fn triangle_ext(s: f64) -> (f64, f64) {
    // wrap into [-2, 2)
    let w = s - 4.0 * ((s + 2.0) / 4.0).floor();
    let a = w.abs();
    let (v, slope_abs) = if a < 1.0 { (a / 2.0, 0.5) } else { (1.0 - a / 2.0, -0.5) };
    if w >= 0.0 {
        (v, slope_abs)
    } else {
        (-v, slope_abs) // odd value, even slope
    }
}

/// d'Alembert value `(u0~(x-t) + u0~(x+t)) / 2` for zero initial velocity.
pub fn dalembert(x: f64, t: f64) -> f64 {
    0.5 * (triangle_ext(x - t).0 + triangle_ext(x + t).0)
}

pub fn dalembert_jet(x: f64, t: f64) -> Jet2 {
    let (vm, sm) = triangle_ext(x - t);
    let (vp, sp) = triangle_ext(x + t);
    Jet2 {
        v: 0.5 * (vm + vp),
        dx: 0.5 * (sm + sp),
        dt: 0.5 * (-sm + sp),
        dxx: 0.0,
        dxt: 0.0,
        dtt: 0.0,
    }
}

/// Burgers initial profile `-sin(pi x)`.
pub fn burgers_initial(x: f64) -> f64 {
    -(PI * x).sin()
}

/// Integrand factor `exp(-cos(pi y) / (2 pi nu))`.
fn cole_hopf_factor(y: f64, viscosity: f64) -> f64 {
    (-(PI * y).cos() / (2.0 * PI * viscosity)).exp()
}

fn cole_hopf_once(x: f64, t: f64, viscosity: f64, nodes: usize) -> f64 {
    let rule = gauss_hermite(nodes);
    let s = (4.0 * viscosity * t).sqrt();
    let mut num = 0.0;
    let mut den = 0.0;
    let term = |z: f64| {
        let y = x - s * z;
        let g = cole_hopf_factor(y, viscosity);
        ((PI * y).sin() * g, g)
    };
    // sum symmetric node pairs together so the odd symmetry at x = 0 is exact
    let half = rule.len() / 2;
    for &(z, w) in rule.iter().take(half) {
        let (n1, d1) = term(z);
        let (n2, d2) = term(-z);
        num += w * (n1 + n2);
        den += w * (d1 + d2);
    }
    if rule.len() % 2 == 1 {
        let (z, w) = rule[half];
        let (n1, d1) = term(z);
        num += w * n1;
        den += w * d1;
    }
    -num / den
}

fn cole_hopf_adaptive(x: f64, t: f64, viscosity: f64, base_nodes: usize) -> Result<f64> {
    if t <= 0.0 {
        return Ok(burgers_initial(x));
    }
    let mut n = base_nodes.max(2);
    let mut coarse = cole_hopf_once(x, t, viscosity, n);
    loop {
        let fine = cole_hopf_once(x, t, viscosity, 2 * n);
        if !fine.is_finite() {
            return Err(Error::NonFinite {
                what: format!("Cole-Hopf quadrature with {} nodes", 2 * n),
                x,
                t,
            });
        }
        if (fine - coarse).abs() <= COLE_HOPF_AGREE || 2 * n >= COLE_HOPF_MAX_NODES {
            return Ok(fine);
        }
        n *= 2;
        coarse = fine;
    }
}

/// Exact Burgers solution via Cole–Hopf quadrature. Accuracy is about 1e-6
/// away from the x = 0 shock layer and degrades toward 1e-4 near it at late
/// times, where the integrand peaks sharpen.
pub fn cole_hopf_reference(x: f64, t: f64, viscosity: f64) -> Result<f64> {
    cole_hopf_adaptive(x, t, viscosity, COLE_HOPF_BASE_NODES)
}

/// Cole–Hopf solution with exact-through-quadrature partials: the jet-valued
/// integrand is differentiated under the integral sign.
fn cole_hopf_jet(x: f64, t: f64, viscosity: f64, nodes: usize) -> Jet2 {
    let rule = gauss_hermite(nodes);
    let (xj, tj) = crate::autodiff::jet_seed(x, t);
    let s = tj.scale(4.0 * viscosity).sqrt();
    let inv_two_pi_nu = 1.0 / (2.0 * PI * viscosity);
    let mut num = Jet2::constant(0.0);
    let mut den = Jet2::constant(0.0);
    let mut accumulate = |z: f64, w: f64| {
        let y = xj - s.scale(z);
        let py = y.scale(PI);
        let g = (py.cos().scale(-inv_two_pi_nu)).exp();
        num = num + (py.sin() * g).scale(w);
        den = den + g.scale(w);
    };
    let half = rule.len() / 2;
    for &(z, w) in rule.iter().take(half) {
        accumulate(z, w);
        accumulate(-z, w);
    }
    if rule.len() % 2 == 1 {
        let (z, w) = rule[half];
        accumulate(z, w);
    }
    -(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heat_spot_values() {
        assert!((heat_exact(1.0, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(heat_exact(0.0, 1.3), 0.0);
        assert!((heat_exact(1.0, 1.0) - 0.084_804_972_471_113_78).abs() < 1e-16);
        assert!((heat_exact(0.5, 0.3) - 0.337_296_160_385_133_06).abs() < 1e-15);
    }

    #[test]
    fn heat_decays_monotonically() {
        for i in 1..20 {
            let x = 0.1 * i as f64;
            let mut prev = heat_exact(x, 0.0);
            for j in 1..=20 {
                let cur = heat_exact(x, 0.1 * j as f64);
                assert!(cur < prev, "not decaying at x={x}");
                prev = cur;
            }
        }
    }

    #[test]
    fn dalembert_spot_values() {
        assert!((dalembert(1.0, 0.0) - 0.5).abs() < 1e-15);
        assert!(dalembert(1.0, 1.0).abs() < 1e-15);
        assert!((dalembert(1.0, 2.0) + 0.5).abs() < 1e-15);
        assert!((dalembert(0.5, 0.25) - 0.25).abs() < 1e-15);
        assert!((dalembert(3.0, 1.2) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn dalembert_boundary_and_periodicity() {
        for i in 0..200 {
            let t = 0.037 * i as f64;
            assert!(dalembert(0.0, t).abs() < 1e-12);
            assert!(dalembert(2.0, t).abs() < 1e-12);
        }
        for i in 0..100 {
            let x = 0.02 * i as f64;
            let t = 0.11 * i as f64;
            assert!((dalembert(x, t) - dalembert(x, t + 4.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn cole_hopf_matches_independent_quadrature() {
        // frozen from an independent arbitrary-precision evaluation
        let nu = burgers_viscosity();
        let cases = [
            (0.5, 0.25, -0.803_198_420_840_632_56),
            (0.5, 0.5, -0.592_769_534_402_051_08),
            (0.5, 0.75, -0.461_413_296_858_671_34),
            (0.25, 0.5, -0.847_354_524_450_930_62),
            (-0.8, 0.9, 0.163_640_952_877_816_6),
            (0.1, 0.75, -0.800_395_992_475_028_91),
            (0.9, 0.1, -0.236_879_885_039_221_87),
            (0.5, 1.0, -0.376_181_395_748_122_09),
            (0.5, 1.5, -0.273_927_479_843_292_44),
        ];
        for (x, t, want) in cases {
            let got = cole_hopf_reference(x, t, nu).unwrap();
            assert!((got - want).abs() < 2e-8, "u({x},{t}) = {got}, want {want}");
        }
    }

    #[test]
    fn cole_hopf_ic_and_symmetry() {
        let nu = burgers_viscosity();
        assert!((cole_hopf_reference(0.5, 0.0, nu).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(cole_hopf_reference(0.0, 0.75, nu).unwrap(), 0.0);
        for i in 1..40 {
            let x = 0.025 * i as f64;
            for t in [0.1, 0.5, 0.9, 1.4] {
                let plus = cole_hopf_reference(x, t, nu).unwrap();
                let minus = cole_hopf_reference(-x, t, nu).unwrap();
                assert!((plus + minus).abs() < 1e-8, "odd symmetry at ({x}, {t})");
            }
        }
        // boundaries
        for t in [0.2, 0.6, 1.0] {
            assert!(cole_hopf_reference(1.0, t, nu).unwrap().abs() < 1e-9);
            assert!(cole_hopf_reference(-1.0, t, nu).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn cole_hopf_jet_value_matches_scalar_path() {
        let nu = burgers_viscosity();
        let r = Reference::Burgers { viscosity: nu, base_nodes: 256 };
        for (x, t) in [(0.5, 0.5), (-0.3, 0.2), (0.8, 1.0)] {
            let jet = r.jet(x, t);
            let val = cole_hopf_once(x, t, nu, 256);
            assert!((jet.v - val).abs() < 1e-12);
            // derivatives vs central differences of the scalar path
            let h = 1e-5;
            let fd_dx = (cole_hopf_once(x + h, t, nu, 256) - cole_hopf_once(x - h, t, nu, 256))
                / (2.0 * h);
            assert!((jet.dx - fd_dx).abs() < 1e-4 * (1.0 + fd_dx.abs()), "{} {}", jet.dx, fd_dx);
            let fd_dt = (cole_hopf_once(x, t + h, nu, 256) - cole_hopf_once(x, t - h, nu, 256))
                / (2.0 * h);
            assert!((jet.dt - fd_dt).abs() < 1e-4 * (1.0 + fd_dt.abs()));
        }
    }
}
