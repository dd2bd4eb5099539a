//! Open-loop measurement of the zero-crossing TED S-curve.

use crate::error::{Error, Result};
use crate::waveform::{synthesize_rx_samples, PhyConfig, SymbolSequence};

use super::{decide, interpolate_at, matched_filter, zc_ted, InterpolatorKind};

/// Timing offsets probed, in symbols. Positive means early sampling.
pub const OFFSET_GRID: [f64; 11] = [-0.4, -0.3, -0.2, -0.1, -0.05, 0.0, 0.05, 0.1, 0.2, 0.3, 0.4];
const MIN_SYMBOLS: usize = 10_000;
const FIT_HALF_WIDTH: f64 = 0.1;
const MONOTONE_HALF_WIDTH: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SCurvePoint {
    /// Sampling earliness in symbol periods.
    pub offset: f64,
    pub mean_error: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TedCalibration {
    /// S-curve slope at the origin, per symbol of earliness.
    pub kp: f64,
    pub points: Vec<SCurvePoint>,
}

/// Measures the TED gain by sampling a zero-skew stream at fixed offsets.
pub fn measure_ted_gain(cfg: &PhyConfig, seed: u64) -> Result<TedCalibration> {
    s_curve(cfg, seed, &OFFSET_GRID)
}

/// S-curve at arbitrary offsets (each in `(-0.5, 0.5)` symbols).
pub fn s_curve(cfg: &PhyConfig, seed: u64, offsets: &[f64]) -> Result<TedCalibration> {
    let cfg = PhyConfig {
        n_symbols: cfg.n_symbols.max(MIN_SYMBOLS),
        ..cfg.clone()
    };
    cfg.validate()?;
    let syms = SymbolSequence::generate(cfg.n_symbols, seed)?;
    let taps = cfg.taps()?;
    let n = cfg.loop_upsampling_factor;
    let half = n as f64 / 2.0;
    let t = cfg.symbol_period();

    let mut points = Vec::with_capacity(offsets.len());
    for (i, &delta) in offsets.iter().enumerate() {
        if delta.is_nan() || delta.abs() >= 0.5 {
            return Err(Error::Calibration(format!(
                "offset {delta} outside (-0.5, 0.5)"
            )));
        }
        let rx = synthesize_rx_samples(&syms, &cfg, 0.0, -delta * t, Some(seed ^ (i as u64 + 1)))?;
        let y = matched_filter(&rx, &taps, cfg.decimation())?;
        let y = y.samples();
        let mut prev: Option<i8> = None;
        let mut errs = Vec::with_capacity(cfg.n_symbols);
        for m in 0..cfg.n_symbols {
            let q = ((m + 2 * cfg.pulse_span) * n) as f64;
            let (Some(x), Some(xm)) = (
                interpolate_at(y, q, InterpolatorKind::Cubic),
                interpolate_at(y, q - half, InterpolatorKind::Cubic),
            ) else {
                continue;
            };
            let d = decide(x);
            if let Some(p) = prev {
                errs.push(zc_ted(xm, p, d));
            }
            prev = Some(d);
        }
        if errs.len() < 2 {
            return Err(Error::Calibration("too few symbols in the stream".into()));
        }
        let len = errs.len() as f64;
        let mean = errs.iter().sum::<f64>() / len;
        let var = errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (len - 1.0);
        points.push(SCurvePoint {
            offset: delta,
            mean_error: mean,
            std_error: (var / len).sqrt(),
        });
    }

    let mut near: Vec<&SCurvePoint> = points
        .iter()
        .filter(|p| p.offset.abs() <= MONOTONE_HALF_WIDTH + 1e-12)
        .collect();
    near.sort_by(|a, b| a.offset.total_cmp(&b.offset));
    if near.windows(2).any(|w| w[1].mean_error <= w[0].mean_error) {
        return Err(Error::Calibration(
            "S-curve is not increasing near the origin".into(),
        ));
    }

    // Least-squares line through the points near the origin.
    let fit: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.offset.abs() <= FIT_HALF_WIDTH + 1e-12)
        .map(|p| (p.offset, p.mean_error))
        .collect();
    if fit.len() < 2 {
        return Err(Error::Calibration(
            "need two offsets near the origin".into(),
        ));
    }
    let k = fit.len() as f64;
    let mx = fit.iter().map(|p| p.0).sum::<f64>() / k;
    let my = fit.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = fit.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let kp = sxy / sxx;
    if !(kp.is_finite() && kp > 0.0) {
        return Err(Error::Calibration(format!("non-positive slope {kp}")));
    }
    Ok(TedCalibration { kp, points })
}
