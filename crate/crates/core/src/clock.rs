//! Hardware clock model and skew conventions.
//!
//! A clock with skew `τ` has its tick period stretched by `(1 + τ)`, so a
//! negative skew means the clock ticks faster than nominal. Skew between a
//! transmitter and a receiver is measured from tick counts over a shared
//! wall-clock window as `tx_ticks / rx_ticks - 1`, which is negative when the
//! receiver counts faster.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest skew magnitude accepted by [`ClockModel`].
pub const MAX_SKEW: f64 = 0.1;

/// A node's free-running hardware clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClockModel {
    nominal_tick_rate: f64,
    skew: f64,
    phase_offset: f64,
}

impl ClockModel {
    pub fn new(nominal_tick_rate: f64, skew: f64, phase_offset: f64) -> Result<Self> {
        if !(nominal_tick_rate.is_finite() && nominal_tick_rate > 0.0) {
            return Err(invalid(
                "nominal_tick_rate",
                format!("{nominal_tick_rate} must be positive"),
            ));
        }
        check_skew(skew)?;
        if !phase_offset.is_finite() {
            return Err(invalid("phase_offset", "must be finite"));
        }
        Ok(Self {
            nominal_tick_rate,
            skew,
            phase_offset,
        })
    }

    /// An ideal clock with no skew and no phase offset.
    pub fn ideal(nominal_tick_rate: f64) -> Result<Self> {
        Self::new(nominal_tick_rate, 0.0, 0.0)
    }

    pub fn nominal_tick_rate(&self) -> f64 {
        self.nominal_tick_rate
    }

    pub fn skew(&self) -> f64 {
        self.skew
    }

    pub fn phase_offset(&self) -> f64 {
        self.phase_offset
    }

    /// Actual ticks per second.
    pub fn tick_rate(&self) -> f64 {
        self.nominal_tick_rate / (1.0 + self.skew)
    }

    /// Wall-clock time of tick `i` (ticks are numbered from 1).
    pub fn tick_time(&self, i: i64) -> f64 {
        self.phase_offset + (i - 1) as f64 / self.tick_rate()
    }

    /// Ticks falling in the half-open wall-clock window `[start, start + duration)`.
    pub fn ticks_in(&self, start: f64, duration: f64) -> Result<TickCount> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(invalid("duration", format!("{duration} must be positive")));
        }
        let r = self.tick_rate();
        let first = (1.0 + (start - self.phase_offset) * r).ceil().max(1.0) as i64;
        let last = (1.0 + (start + duration - self.phase_offset) * r).ceil() as i64 - 1;
        TickCount::new(first, last)
    }

    /// Same clock with its tick rate multiplied by `factor`.
    ///
    /// The returned skew is exact: `(1 + skew) / factor - 1`.
    pub fn with_rate_scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(invalid("rate factor", format!("{factor} must be positive")));
        }
        Self::new(
            self.nominal_tick_rate,
            (1.0 + self.skew) / factor - 1.0,
            self.phase_offset,
        )
    }
}

pub(crate) fn check_skew(skew: f64) -> Result<()> {
    if !(skew.is_finite() && skew.abs() < MAX_SKEW) {
        return Err(invalid(
            "skew",
            format!("|{skew}| must be below {MAX_SKEW}"),
        ));
    }
    Ok(())
}

/// Inclusive range of tick indices observed over a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TickCount {
    pub first_tick: i64,
    pub last_tick: i64,
}

impl TickCount {
    pub fn new(first_tick: i64, last_tick: i64) -> Result<Self> {
        if last_tick <= first_tick {
            return Err(invalid(
                "tick count",
                format!("last tick {last_tick} must exceed first tick {first_tick}"),
            ));
        }
        Ok(Self {
            first_tick,
            last_tick,
        })
    }

    /// Number of tick intervals elapsed.
    pub fn span(&self) -> i64 {
        self.last_tick - self.first_tick
    }
}

/// Skew of the receiver relative to the transmitter from counts over the same interval.
///
/// Returns `tx_span / rx_span - 1`.
pub fn skew_from_counts(tx: TickCount, rx: TickCount) -> Result<f64> {
    let (tx_span, rx_span) = (tx.span(), rx.span());
    if tx_span <= 0 || rx_span <= 0 {
        return Err(invalid("tick count", "tick spans must be positive"));
    }
    Ok(tx_span as f64 / rx_span as f64 - 1.0)
}

/// Error remaining after correcting a clock by `estimate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub absolute: f64,
    /// Percentage of `|true_skew|`; absent when the true skew is zero.
    pub percent: Option<f64>,
}

pub fn residual_after_correction(true_skew: f64, estimate: f64) -> Residual {
    let absolute = (true_skew - estimate).abs();
    let percent = (true_skew != 0.0).then(|| 100.0 * absolute / true_skew.abs());
    Residual { absolute, percent }
}
