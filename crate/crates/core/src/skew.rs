//! Skew from the fractional-interval trace: unwrap, fit a line, scale.

use serde::{Deserialize, Serialize};

use crate::clock::{residual_after_correction, ClockModel, Residual};
use crate::error::{invalid, Error, Result};
use crate::timing::FractionalIntervalTrace;

/// Strobes dropped from the start of a trace before fitting.
pub const DEFAULT_DISCARD: usize = 500;

/// Removes the modulo-1 wraps from a sequence of fractional intervals.
///
/// A step larger than 1/2 in magnitude is taken as a wrap.
pub fn unwrap_values(mu: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(mu.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &m in mu {
        if let Some(p) = prev {
            let d = m - p;
            if d > 0.5 {
                offset -= 1.0;
            } else if d < -0.5 {
                offset += 1.0;
            }
        }
        prev = Some(m);
        out.push(m + offset);
    }
    out
}

pub fn unwrap_mu(trace: &FractionalIntervalTrace) -> Vec<f64> {
    unwrap_values(&trace.mu().collect::<Vec<_>>())
}

/// Closed-form least-squares slope of `y[n]` against `n = 0..N-1`:
/// `-6/(N(N+1)) Σy + 12/(N(N²-1)) Σ n y`.
///
/// The sequence is shifted by its mean first; the slope is unchanged and
/// the two sums no longer cancel each other.
pub fn ls_slope(y: &[f64]) -> Result<f64> {
    if y.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: y.len(),
        });
    }
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let (mut s0, mut s1) = (0.0, 0.0);
    for (i, &v) in y.iter().enumerate() {
        let c = v - mean;
        s0 += c;
        s1 += i as f64 * c;
    }
    let slope = -6.0 / (n * (n + 1.0)) * s0 + 12.0 / (n * (n * n - 1.0)) * s1;
    if !slope.is_finite() {
        return Err(invalid("ls_slope input", "values must be finite"));
    }
    Ok(slope)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkewEstimate {
    /// Slope of the unwrapped fractional interval per strobe.
    pub slope_per_strobe: f64,
    /// Slope divided by the loop samples per symbol.
    pub skew: f64,
    pub n_points: usize,
    pub discarded_prefix: usize,
    pub residual_vs_truth: Option<Residual>,
}

/// Fits the trace after dropping `discard` strobes. `truth`, when given,
/// fills in the residual.
pub fn estimate_skew(
    trace: &FractionalIntervalTrace,
    discard: usize,
    truth: Option<f64>,
) -> Result<SkewEstimate> {
    if trace.len() < discard + 3 {
        return Err(Error::InsufficientData {
            needed: discard + 3,
            got: trace.len(),
        });
    }
    let sps = trace.loop_samples_per_symbol();
    if sps == 0 {
        return Err(invalid("loop_samples_per_symbol", "must be at least 1"));
    }
    let tail = trace.skip(discard);
    let slope = ls_slope(&unwrap_mu(&tail))?;
    let skew = slope / sps as f64;
    Ok(SkewEstimate {
        slope_per_strobe: slope,
        skew,
        n_points: tail.len(),
        discarded_prefix: discard,
        residual_vs_truth: truth.map(|t| residual_after_correction(t, skew)),
    })
}

/// The receiver clock with its tick rate multiplied by `1 + est.skew`.
pub fn correct_application_clock(clock: &ClockModel, est: &SkewEstimate) -> Result<ClockModel> {
    clock.with_rate_scaled(1.0 + est.skew)
}
