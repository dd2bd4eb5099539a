//! Feedback symbol timing recovery.
//!
//! Matched filter, decimation to the loop rate, then a per-sample loop of
//! interpolation control, cubic (or lower order) interpolation, a
//! decision-directed zero-crossing TED and a PI loop filter. Every strobe
//! is logged to a [`FractionalIntervalTrace`].

mod calibrate;
mod control;
mod filter;
mod interp;
mod matched;
mod ted;
mod trace;

pub use calibrate::{measure_ted_gain, s_curve, SCurvePoint, TedCalibration, OFFSET_GRID};
pub use control::interpolation_control_step;
pub use filter::{design_loop_gains, loop_filter_step};
pub use interp::{interpolate, interpolate_at, InterpolatorKind};
pub use matched::matched_filter;
pub use ted::{decide, zc_ted};
pub use trace::{FractionalIntervalTrace, TraceEntry, CSV_HEADER};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::waveform::{PhyConfig, SampleStream};

pub const DEFAULT_BANDWIDTH: f64 = 0.01;
pub const DEFAULT_DAMPING: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Resolved loop parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopConfig {
    pub loop_bandwidth_norm: f64,
    pub damping: f64,
    pub ted_gain: f64,
    pub k1: f64,
    pub k2: f64,
    pub interpolator_kind: InterpolatorKind,
}

impl LoopConfig {
    /// Gains from the bandwidth/damping design.
    pub fn design(
        loop_bandwidth_norm: f64,
        damping: f64,
        ted_gain: f64,
        loop_sps: usize,
        interpolator_kind: InterpolatorKind,
    ) -> Result<Self> {
        let (k1, k2) = design_loop_gains(loop_bandwidth_norm, damping, ted_gain, loop_sps)?;
        Ok(Self {
            loop_bandwidth_norm,
            damping,
            ted_gain,
            k1,
            k2,
            interpolator_kind,
        })
    }

    /// Explicit gains. Zero gains give an open loop that strobes at the nominal rate.
    pub fn with_gains(self, k1: f64, k2: f64) -> Result<Self> {
        let c = Self { k1, k2, ..self };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.loop_bandwidth_norm > 0.0 && self.loop_bandwidth_norm <= 0.1) {
            return Err(invalid(
                "loop_bandwidth_norm",
                format!("{} is outside (0, 0.1]", self.loop_bandwidth_norm),
            ));
        }
        if !(self.damping.is_finite() && self.damping > 0.0) {
            return Err(invalid("damping", "must be positive"));
        }
        if !(self.k1.is_finite() && self.k2.is_finite()) {
            return Err(invalid("loop gains", "k1 and k2 must be finite"));
        }
        Ok(())
    }
}

/// Loop design as written in a scenario; the TED gain is measured when absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LoopDesign {
    pub loop_bandwidth_norm: f64,
    pub damping: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ted_gain: Option<f64>,
    pub interpolator_kind: InterpolatorKind,
}

impl Default for LoopDesign {
    fn default() -> Self {
        Self {
            loop_bandwidth_norm: DEFAULT_BANDWIDTH,
            damping: DEFAULT_DAMPING,
            ted_gain: None,
            interpolator_kind: InterpolatorKind::Cubic,
        }
    }
}

impl LoopDesign {
    pub fn resolve(&self, phy: &PhyConfig, calibration_seed: u64) -> Result<LoopConfig> {
        let kp = match self.ted_gain {
            Some(kp) => kp,
            None => measure_ted_gain(phy, calibration_seed)?.kp,
        };
        LoopConfig::design(
            self.loop_bandwidth_norm,
            self.damping,
            kp,
            phy.loop_upsampling_factor,
            self.interpolator_kind,
        )
    }
}

/// Mutable state carried from one loop sample to the next.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopState {
    pub eta: f64,
    pub integrator: f64,
    pub mu: f64,
    pub strobe: bool,
    pub last_decision: i8,
}

impl LoopState {
    pub fn new(eta: f64) -> Self {
        Self {
            eta,
            integrator: 0.0,
            mu: 0.0,
            strobe: false,
            last_decision: 1,
        }
    }
}

/// Output of [`run_timing_recovery`].
#[derive(Debug, Clone, PartialEq)]
pub struct Recovery {
    pub trace: FractionalIntervalTrace,
    /// One hard decision per strobe.
    pub decisions: Vec<i8>,
    pub final_state: LoopState,
}

/// Runs the loop over a receiver sample stream.
///
/// The loop starts at the nominal position of the first symbol and stops
/// after `n_symbols` strobes or when the interpolator window reaches the
/// end of the filtered stream.
pub fn run_timing_recovery(
    rx: &SampleStream,
    phy: &PhyConfig,
    lc: &LoopConfig,
) -> Result<Recovery> {
    phy.validate()?;
    lc.validate()?;
    let n = phy.loop_upsampling_factor;
    let y = matched_filter(rx, &phy.taps()?, phy.decimation())?;
    let y = y.samples();

    let half = n as f64 / 2.0;
    let start = (2 * phy.pulse_span * n).max(half.ceil() as usize + 1);
    if y.len() < start + 3 {
        return Err(Error::InsufficientData {
            needed: start + 3,
            got: y.len(),
        });
    }
    let end = y.len() - 3;

    let mut state = LoopState::new(0.0);
    let mut trace = FractionalIntervalTrace::new(n);
    let mut decisions = Vec::with_capacity(phy.n_symbols);
    let mut v = 0.0;
    let mut last_strobe = start;
    let max_gap = 4 * n;

    for idx in start..end {
        if decisions.len() >= phy.n_symbols {
            break;
        }
        if interpolation_control_step(&mut state, v, n, idx)? {
            let pos = idx as f64 + state.mu;
            let x = interpolate_at(y, pos, lc.interpolator_kind);
            let xm = interpolate_at(y, pos - half, lc.interpolator_kind);
            let (Some(x), Some(xm)) = (x, xm) else {
                break;
            };
            let d = decide(x);
            // the first strobe has no previous decision to compare with
            let e = if decisions.is_empty() {
                0.0
            } else {
                zc_ted(xm, state.last_decision, d)
            };
            state.last_decision = d;
            decisions.push(d);
            last_strobe = idx;
            v = loop_filter_step(&mut state, e, lc.k1, lc.k2);
            trace.push(TraceEntry {
                cycle_index: (decisions.len() - 1) as u64,
                basepoint_index: idx as u64,
                mu: state.mu,
                ted_error: e,
                loop_out: v,
            })?;
            continue;
        }
        if idx - last_strobe > max_gap {
            return Err(Error::LoopDivergence {
                sample: idx,
                reason: format!(
                    "no strobe for {} samples (eta {}, integrator {})",
                    idx - last_strobe,
                    state.eta,
                    state.integrator
                ),
            });
        }
        v = loop_filter_step(&mut state, 0.0, lc.k1, lc.k2);
    }

    Ok(Recovery {
        trace,
        decisions,
        final_state: state,
    })
}

/// Decision errors against the transmitted symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolErrors {
    /// Decision index minus symbol index at the best alignment.
    pub lag: isize,
    pub errors: usize,
    pub compared: usize,
}

/// Counts errors after skipping the first `skip` decisions, searching
/// alignments within `±max_lag`.
pub fn count_symbol_errors(
    decisions: &[i8],
    symbols: &[i8],
    skip: usize,
    max_lag: usize,
) -> Result<SymbolErrors> {
    let max_lag = max_lag as isize;
    let mut best: Option<SymbolErrors> = None;
    for lag in -max_lag..=max_lag {
        let mut errors = 0;
        let mut compared = 0;
        for (i, &d) in decisions.iter().enumerate().skip(skip) {
            let j = i as isize - lag;
            if j < 0 || j as usize >= symbols.len() {
                continue;
            }
            compared += 1;
            errors += usize::from(d != symbols[j as usize]);
        }
        if compared == 0 {
            continue;
        }
        let cand = SymbolErrors {
            lag,
            errors,
            compared,
        };
        if best.is_none_or(|b| errors < b.errors) {
            best = Some(cand);
        }
    }
    best.ok_or(Error::InsufficientData {
        needed: skip + 1,
        got: decisions.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{synthesize_rx_samples, SymbolSequence};

    fn loop_for(phy: &PhyConfig) -> LoopConfig {
        LoopDesign::default().resolve(phy, 1).unwrap()
    }

    #[test]
    fn zero_skew_decodes_without_errors() {
        let phy = PhyConfig::default();
        let syms = SymbolSequence::generate(phy.n_symbols, 5).unwrap();
        let rx = synthesize_rx_samples(&syms, &phy, 0.0, 0.0, None).unwrap();
        let rec = run_timing_recovery(&rx, &phy, &loop_for(&phy)).unwrap();
        let n = rec.trace.len() as i64;
        assert!(
            (n - phy.n_symbols as i64).abs() <= phy.pulse_span as i64,
            "{n}"
        );
        let errs = count_symbol_errors(&rec.decisions, syms.symbols(), 500, 3).unwrap();
        assert_eq!(errs.errors, 0);
        assert_eq!(errs.lag, 0);
    }

    #[test]
    fn trace_invariants_hold_under_skew() {
        let phy = PhyConfig::default();
        let syms = SymbolSequence::generate(phy.n_symbols, 6).unwrap();
        let rx = synthesize_rx_samples(&syms, &phy, 2.5e-3, 3e-4, None).unwrap();
        let rec = run_timing_recovery(&rx, &phy, &loop_for(&phy)).unwrap();
        let e = rec.trace.entries();
        assert!(e.iter().all(|x| (0.0..1.0).contains(&x.mu)));
        assert!(e
            .windows(2)
            .all(|w| w[1].basepoint_index > w[0].basepoint_index));
    }

    #[test]
    fn open_loop_strobes_at_nominal_rate() {
        let phy = PhyConfig::default();
        let syms = SymbolSequence::generate(phy.n_symbols, 7).unwrap();
        let rx = synthesize_rx_samples(&syms, &phy, 0.0, 0.0, None).unwrap();
        let lc = loop_for(&phy).with_gains(0.0, 0.0).unwrap();
        let rec = run_timing_recovery(&rx, &phy, &lc).unwrap();
        assert!(rec.trace.mu().all(|m| m == 0.0));
        let errs = count_symbol_errors(&rec.decisions, syms.symbols(), 0, 0).unwrap();
        assert_eq!(errs.errors, 0);
    }

    #[test]
    fn error_count_finds_lag() {
        let syms = [1, -1, -1, 1, 1, 1, -1, 1, -1, -1];
        let dec = [1, 1, -1, -1, 1, 1, 1, -1, 1, -1];
        let r = count_symbol_errors(&dec, &syms, 0, 2).unwrap();
        assert_eq!(r.lag, 1);
        assert_eq!(r.errors, 0);
    }

    #[test]
    fn rejects_bad_loop_config() {
        let lc = loop_for(&PhyConfig::default());
        assert!(lc.with_gains(f64::NAN, 0.0).is_err());
        let bad = LoopConfig {
            loop_bandwidth_norm: 0.5,
            ..lc
        };
        assert!(bad.validate().is_err());
    }
}
