//! Proportional-plus-integrator loop filter and its gain design.

use crate::error::{invalid, Result};

use super::LoopState;

/// One filter update: `integrator += k2 e`, returns `v = k1 e + integrator`.
pub fn loop_filter_step(state: &mut LoopState, e: f64, k1: f64, k2: f64) -> f64 {
    state.integrator += k2 * e;
    k1 * e + state.integrator
}

/// Gains of a second-order loop with counter gain -1.
///
/// `bnt` is the noise bandwidth normalized to the symbol rate; the design
/// runs at the loop sample rate, i.e. with `bnt / loop_sps`.
pub fn design_loop_gains(bnt: f64, zeta: f64, kp: f64, loop_sps: usize) -> Result<(f64, f64)> {
    if !(bnt > 0.0 && bnt <= 0.1) {
        return Err(invalid(
            "loop_bandwidth",
            format!("{bnt} is outside (0, 0.1]"),
        ));
    }
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(invalid("damping", "must be positive"));
    }
    if !(kp.is_finite() && kp > 0.0) {
        return Err(invalid("ted_gain", "must be positive"));
    }
    if loop_sps == 0 {
        return Err(invalid("loop_sps", "must be at least 1"));
    }
    const K0: f64 = -1.0;
    let theta = (bnt / loop_sps as f64) / (zeta + 0.25 / zeta);
    let denom = 1.0 + 2.0 * zeta * theta + theta * theta;
    let k1 = 4.0 * zeta * theta / denom / (K0 * kp);
    let k2 = 4.0 * theta * theta / denom / (K0 * kp);
    Ok((k1, k2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proportional_only() {
        let mut s = LoopState::new(0.5);
        s.integrator = 0.25;
        let v = loop_filter_step(&mut s, 2.0, 0.1, 0.0);
        assert!((v - 0.45).abs() < 1e-15);
        assert_eq!(s.integrator, 0.25);
    }

    #[test]
    fn zero_error_holds_integrator() {
        let mut s = LoopState::new(0.5);
        s.integrator = -0.01;
        for _ in 0..10 {
            assert_eq!(loop_filter_step(&mut s, 0.0, 0.3, 0.2), -0.01);
        }
    }

    #[test]
    fn integrator_ramp() {
        let mut s = LoopState::new(0.5);
        let v: Vec<f64> = (0..3)
            .map(|_| loop_filter_step(&mut s, 1.0, 0.0, 0.1))
            .collect();
        for (got, want) in v.iter().zip([0.1, 0.2, 0.3]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn gains_scale_inversely_with_kp() {
        let (a1, a2) = design_loop_gains(0.005, 0.707, 1.0, 2).unwrap();
        let (b1, b2) = design_loop_gains(0.005, 0.707, 2.0, 2).unwrap();
        assert!((a1 / b1 - 2.0).abs() < 1e-12);
        assert!((a2 / b2 - 2.0).abs() < 1e-12);
        assert!(a1 < 0.0 && a2 < 0.0);
    }

    #[test]
    fn gains_vanish_with_bandwidth() {
        let (k1, k2) = design_loop_gains(1e-9, 0.707, 1.0, 2).unwrap();
        assert!(k1.abs() < 1e-8 && k2.abs() < 1e-16);
    }

    #[test]
    fn rejects_bad_bandwidth() {
        assert!(design_loop_gains(0.0, 0.7, 1.0, 2).is_err());
        assert!(design_loop_gains(0.2, 0.7, 1.0, 2).is_err());
        assert!(design_loop_gains(0.01, 0.7, -1.0, 2).is_err());
    }
}
