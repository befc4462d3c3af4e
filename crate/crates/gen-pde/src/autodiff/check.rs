//! Finite-difference gradient verification.

use super::tape::{Tape, Var};
use crate::error::Result;

/// Floor for relative deviations: components below this magnitude are
/// compared absolutely, since central differences carry roundoff noise of
/// roughly `eps / step` regardless of the component size.
pub const REL_FLOOR: f64 = 1e-4;

/// Relative deviation with a magnitude floor.
pub fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(REL_FLOOR)
}

/// Compare the tape gradient of a recorded scalar function against central
/// finite differences. `f` records the function on a fresh tape given the
/// parameter leaves and returns the scalar output node. Returns the maximum
/// relative deviation over parameters.
///
/// `step` must lie in `[1e-8, 1e-3]`.
pub fn check_gradient<F>(f: F, params: &[f64], step: f64) -> Result<f64>
where
    F: Fn(&mut Tape, &[Var]) -> Result<Var>,
{
    assert!((1e-8..=1e-3).contains(&step), "step {step} outside [1e-8, 1e-3]");

    let eval = |p: &[f64]| -> Result<f64> {
        let mut tape = Tape::new();
        let vars = tape.alloc_params(p);
        let out = f(&mut tape, &vars)?;
        Ok(tape.value(out).v)
    };

    let mut tape = Tape::new();
    let vars = tape.alloc_params(params);
    let out = f(&mut tape, &vars)?;
    let grad = tape.grad(out)?;

    let mut scratch = params.to_vec();
    let mut max_dev: f64 = 0.0;
    for i in 0..params.len() {
        let orig = scratch[i];
        scratch[i] = orig + step;
        let plus = eval(&scratch)?;
        scratch[i] = orig - step;
        let minus = eval(&scratch)?;
        scratch[i] = orig;
        let fd = (plus - minus) / (2.0 * step);
        max_dev = max_dev.max(rel_dev(grad[i], fd));
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bilinear() {
        // f = p0 * p1 at (2, 5)
        let dev = check_gradient(
            |tape, p| Ok(tape.mul(p[0], p[1])),
            &[2.0, 5.0],
            1e-5,
        )
        .unwrap();
        assert!(dev <= 1e-6, "deviation {dev}");
    }

    #[test]
    fn scalar_tanh() {
        let dev = check_gradient(|tape, p| Ok(tape.tanh(p[0])), &[0.3], 1e-5).unwrap();
        assert!(dev <= 1e-6, "deviation {dev}");
    }

    /// Five-parameter network against an analytically derived gradient:
    /// f = p0 sin(p1 x + p2) + p3 tanh(p4 x t) + p0 p3 at
    /// p = (0.7, 1.3, 0.4, -0.6, 0.9), (x, t) = (0.8, -0.3).
    #[test]
    fn five_parameter_network() {
        let record = |tape: &mut Tape, p: &[Var]| {
            let (x, t) = tape.seed_inputs(0.8, -0.3);
            let a = tape.mul(p[1], x);
            let b = tape.add(a, p[2]);
            let s = tape.sin(b);
            let term1 = tape.mul(p[0], s);
            let xt = tape.mul(x, t);
            let c = tape.mul(p[4], xt);
            let th = tape.tanh(c);
            let term2 = tape.mul(p[3], th);
            let term3 = tape.mul(p[0], p[3]);
            let s1 = tape.add(term1, term2);
            Ok(tape.add(s1, term3))
        };
        let params = [0.7, 1.3, 0.4, -0.6, 0.9];

        let mut tape = Tape::new();
        let vars = tape.alloc_params(&params);
        let out = record(&mut tape, &vars).unwrap();
        assert!((tape.value(out).v - 0.401_642_222_174_289_58).abs() < 1e-15);
        let grad = tape.grad(out).unwrap();
        let expected = [
            0.391_458_348_191_686_46,
            0.073_037_276_893_361_476,
            0.091_296_596_116_701_845,
            0.487_297_702_599_818_24,
            0.137_485_113_506_018_59,
        ];
        for (g, e) in grad.iter().zip(expected.iter()) {
            assert!((g - e).abs() < 1e-14, "{g} vs {e}");
        }

        let dev = check_gradient(record, &params, 1e-5).unwrap();
        assert!(dev <= 1e-6, "deviation {dev}");
    }
}
