//! Gauss–Hermite nodes and weights for `∫ e^{-z^2} f(z) dz`.
//!
//! Newton iteration on the orthonormal Hermite recurrence with independent
//! WKB initial guesses per root; reliable through n = 512 (beyond that the
//! recurrence itself overflows near the largest roots).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

const PIM4: f64 = 0.751_125_544_464_942_6; // pi^{-1/4}
const MAX_NEWTON: usize = 24;

/// Scaled Hermite value and derivative at `z`: `p = H~_n(z)` in the
/// orthonormal normalization and `pp = H~_n'(z) = sqrt(2n) H~_{n-1}(z)`.
fn scaled_hermite(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = PIM4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / j as f64).sqrt() * p2 - ((j - 1) as f64 / j as f64).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

/// WKB initial guess for the k-th positive root (k = 0 is the largest):
/// with `nu = 2n + 1`, the quantization condition places the root at
/// `sqrt(nu) cos(theta)` where `theta - sin(theta) cos(theta) = 2 pi
/// (k + 3/4) / nu`. Each root gets an independent guess, so Newton never
/// walks off to a neighboring basin however large the rule is.
fn wkb_guess(n: usize, k: usize) -> f64 {
    let nu = (2 * n + 1) as f64;
    let target = 2.0 * std::f64::consts::PI * (k as f64 + 0.75) / nu;
    // solve g(theta) = theta - sin(theta)cos(theta) = target by Newton,
    // g'(theta) = 2 sin^2(theta)
    let mut theta = (3.0 * target / 2.0).cbrt(); // small-angle inversion
    for _ in 0..40 {
        let g = theta - theta.sin() * theta.cos();
        let gp = 2.0 * theta.sin() * theta.sin();
        if gp < 1e-18 {
            break;
        }
        let step = (g - target) / gp;
        theta -= step;
        if step.abs() < 1e-14 {
            break;
        }
    }
    nu.sqrt() * theta.cos()
}

/// Compute the `n`-point rule directly. Nodes come out symmetric about zero
/// with exactly mirrored weights.
pub fn gauss_hermite_rule(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2, "rule needs at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = wkb_guess(n, i);
        if n % 2 == 1 && i == m - 1 {
            z = 0.0; // odd rules have an exact root at the origin
        }
        let mut pp = 0.0;
        for _ in 0..MAX_NEWTON {
            let (p, d) = scaled_hermite(n, z);
            pp = d;
            let step = p / d;
            z -= step;
            if step.abs() <= 1e-15 * (1.0 + z.abs()) {
                break;
            }
        }
        if !(n % 2 == 1 && i == m - 1) {
            let (_, d) = scaled_hermite(n, z);
            pp = d;
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    if n % 2 == 1 {
        nodes[m - 1] = 0.0;
        let (_, pp) = scaled_hermite(n, 0.0);
        weights[m - 1] = 2.0 / (pp * pp);
    }
    nodes.into_iter().zip(weights).collect()
}

/// Shared, cached rule for repeated evaluations at the same size.
pub fn gauss_hermite(n: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard.entry(n).or_insert_with(|| Arc::new(gauss_hermite_rule(n))).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn three_point_rule_matches_known_values() {
        let rule = gauss_hermite_rule(3);
        let known_x = 1.224_744_871_391_589;
        let known_w0 = 0.295_408_975_150_919_35;
        let known_w1 = 1.181_635_900_603_677_4;
        assert!((rule[0].0 - known_x).abs() < 1e-14);
        assert!((rule[1].0).abs() < 1e-14);
        assert!((rule[2].0 + known_x).abs() < 1e-14);
        assert!((rule[0].1 - known_w0).abs() < 1e-14);
        assert!((rule[1].1 - known_w1).abs() < 1e-14);
    }

    #[test]
    fn moments_at_large_sizes() {
        for n in [64, 128, 256, 512] {
            let rule = gauss_hermite_rule(n);
            let m0: f64 = rule.iter().map(|(_, w)| w).sum();
            let m2: f64 = rule.iter().map(|(z, w)| w * z * z).sum();
            let m4: f64 = rule.iter().map(|(z, w)| w * z.powi(4)).sum();
            assert!((m0 - PI.sqrt()).abs() < 1e-13, "n={n}: m0={m0}");
            assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-13, "n={n}: m2={m2}");
            assert!((m4 - 0.75 * PI.sqrt()).abs() < 1e-12, "n={n}: m4={m4}");
            assert!(rule.iter().all(|(z, w)| z.is_finite() && w.is_finite() && *w >= 0.0));
            assert!(rule.iter().take(n / 2).rev().take(n / 4).all(|(_, w)| *w > 0.0));
        }
    }

    #[test]
    fn nodes_are_exactly_symmetric() {
        let rule = gauss_hermite_rule(128);
        for i in 0..64 {
            let (z1, w1) = rule[i];
            let (z2, w2) = rule[127 - i];
            assert_eq!(z1.to_bits(), (-z2).to_bits());
            assert_eq!(w1.to_bits(), w2.to_bits());
        }
    }
}
