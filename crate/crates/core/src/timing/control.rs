//! Modulo-1 decrementing counter that schedules interpolation strobes.

use crate::error::{Error, Result};

use super::LoopState;

/// Advances the counter by one loop sample.
///
/// `W = 1/loop_sps + v`. An underflow (`eta - W < 0`) is a strobe; the
/// fractional interval is then `eta / W` past the current sample.
pub fn interpolation_control_step(
    state: &mut LoopState,
    v: f64,
    loop_sps: usize,
    sample: usize,
) -> Result<bool> {
    let w = 1.0 / loop_sps as f64 + v;
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::LoopDivergence {
            sample,
            reason: format!("counter step W = {w} is not positive"),
        });
    }
    let next = state.eta - w;
    state.strobe = next < 0.0;
    if state.strobe {
        state.mu = (state.eta / w).min(ONE_MINUS_ULP);
    }
    let wrapped = next.rem_euclid(1.0);
    state.eta = if wrapped >= 1.0 { 0.0 } else { wrapped };
    Ok(state.strobe)
}

const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unperturbed_counter_strobes_every_loop_sps() {
        let mut s = LoopState::new(0.9);
        let mut strobes = vec![];
        let mut mus = vec![];
        for n in 0..20 {
            if interpolation_control_step(&mut s, 0.0, 2, n).unwrap() {
                strobes.push(n);
                mus.push(s.mu);
            }
        }
        assert!(strobes.windows(2).all(|w| w[1] - w[0] == 2));
        assert!(mus.iter().all(|&m| (m - mus[0]).abs() < 1e-12));
    }

    #[test]
    fn first_step_hand_iteration() {
        let mut s = LoopState::new(0.3);
        assert!(interpolation_control_step(&mut s, 0.0, 2, 0).unwrap());
        assert!((s.mu - 0.6).abs() < 1e-15);
        assert!((s.eta - 0.8).abs() < 1e-15);
    }

    #[test]
    fn positive_v_shortens_strobe_spacing() {
        let mut s = LoopState::new(0.5);
        let count = (0..10_000)
            .filter(|&n| interpolation_control_step(&mut s, 0.01, 2, n).unwrap())
            .count();
        let spacing = 10_000.0 / count as f64;
        assert!(spacing < 2.0, "{spacing}");
        assert!((spacing - 1.0 / 0.51).abs() < 1e-3);
    }

    #[test]
    fn non_positive_step_diverges() {
        let mut s = LoopState::new(0.5);
        assert!(matches!(
            interpolation_control_step(&mut s, -0.6, 2, 7),
            Err(Error::LoopDivergence { sample: 7, .. })
        ));
    }

    #[test]
    fn state_stays_in_unit_interval() {
        let mut s = LoopState::new(0.0);
        for n in 0..1000 {
            let v = 0.02 * ((n as f64) * 0.37).sin();
            interpolation_control_step(&mut s, v, 2, n).unwrap();
            assert!((0.0..1.0).contains(&s.eta));
            assert!((0.0..1.0).contains(&s.mu));
        }
    }
}
