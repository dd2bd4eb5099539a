//! Binary PAM transmit waveform and receiver sampling under a skewed clock.
//!
//! The transmitted signal is the continuous-time pulse train
//! `s(t) = Σ a_m g(t - (m + span) T)` built from a truncated square-root
//! raised-cosine pulse `g`. The receiver samples it directly at its own
//! (skewed) sampling instants, so the configured skew is the exact ground
//! truth seen by the timing loop.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::clock::check_skew;
use crate::error::{invalid, Result};

/// Link parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhyConfig {
    /// Symbols per second.
    pub symbol_rate: f64,
    /// Receiver samples per symbol at the front end.
    pub samples_per_symbol: usize,
    /// SRRC excess bandwidth.
    pub rolloff: f64,
    /// Half-width of the truncated pulse, in symbols.
    pub pulse_span: usize,
    /// Samples per symbol at the timing-loop rate.
    pub loop_upsampling_factor: usize,
    pub n_symbols: usize,
    /// Per-symbol SNR in dB; `None` means noiseless.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub es_over_n0_db: Option<f64>,
}

impl Default for PhyConfig {
    /// Binary PAM at 1000 symbols/s, 8 samples/symbol, 50% excess bandwidth,
    /// loop at 2 samples/symbol, 3000 symbols.
    fn default() -> Self {
        Self {
            symbol_rate: 1000.0,
            samples_per_symbol: 8,
            rolloff: 0.5,
            pulse_span: 10,
            loop_upsampling_factor: 2,
            n_symbols: 3000,
            es_over_n0_db: None,
        }
    }
}

impl PhyConfig {
    /// Embedded-target link: 4000 symbols/s, 4 samples/symbol, 22000 symbols.
    pub fn embedded() -> Self {
        Self {
            symbol_rate: 4000.0,
            samples_per_symbol: 4,
            n_symbols: 22000,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.symbol_rate.is_finite() && self.symbol_rate > 0.0) {
            return Err(invalid("symbol_rate", "must be positive"));
        }
        if self.samples_per_symbol < 2 {
            return Err(invalid("samples_per_symbol", "must be at least 2"));
        }
        check_rolloff(self.rolloff)?;
        if self.pulse_span < 4 {
            return Err(invalid("pulse_span", "must be at least 4 symbols"));
        }
        if self.loop_upsampling_factor < 1 {
            return Err(invalid("loop_upsampling_factor", "must be at least 1"));
        }
        if !self
            .samples_per_symbol
            .is_multiple_of(self.loop_upsampling_factor)
        {
            return Err(invalid(
                "loop_upsampling_factor",
                format!(
                    "{} does not divide samples_per_symbol {}",
                    self.loop_upsampling_factor, self.samples_per_symbol
                ),
            ));
        }
        if self.n_symbols <= 10 * self.pulse_span {
            return Err(invalid(
                "n_symbols",
                format!("must exceed 10 x pulse_span = {}", 10 * self.pulse_span),
            ));
        }
        if let Some(db) = self.es_over_n0_db {
            if !db.is_finite() {
                return Err(invalid("es_over_n0_db", "must be finite"));
            }
        }
        Ok(())
    }

    pub fn symbol_period(&self) -> f64 {
        1.0 / self.symbol_rate
    }

    pub fn sample_rate(&self) -> f64 {
        self.symbol_rate * self.samples_per_symbol as f64
    }

    /// Front-end to loop-rate decimation factor.
    pub fn decimation(&self) -> usize {
        self.samples_per_symbol / self.loop_upsampling_factor
    }

    /// Duration of the transmission including pulse tails at both ends.
    pub fn transmission_window(&self) -> f64 {
        (self.n_symbols + 2 * self.pulse_span) as f64 * self.symbol_period()
    }

    /// Matched-filter taps for this link.
    pub fn taps(&self) -> Result<Vec<f64>> {
        srrc_taps(self.rolloff, self.pulse_span, self.samples_per_symbol)
    }
}

fn check_rolloff(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(invalid("rolloff", format!("{beta} is outside (0, 1]")));
    }
    Ok(())
}

/// Binary antipodal data symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    symbols: Vec<i8>,
    seed: u64,
}

impl SymbolSequence {
    /// `n` equiprobable ±1 symbols, reproducible for a fixed seed.
    pub fn generate(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("symbol count", "must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let symbols = (0..n)
            .map(|_| if rng.random_bool(0.5) { 1 } else { -1 })
            .collect();
        Ok(Self { symbols, seed })
    }

    /// Wraps explicit symbols; every value must be +1 or -1.
    pub fn from_symbols(symbols: Vec<i8>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(invalid("symbol count", "must be positive"));
        }
        if let Some(bad) = symbols.iter().find(|&&s| s != 1 && s != -1) {
            return Err(invalid("symbol", format!("{bad} is not +1 or -1")));
        }
        Ok(Self { symbols, seed: 0 })
    }

    pub fn symbols(&self) -> &[i8] {
        &self.symbols
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Real-valued samples at a fixed nominal rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleStream {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl SampleStream {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(invalid("sample_rate", "must be positive"));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(invalid("sample stream", format!("non-finite value at {i}")));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Un-normalized SRRC impulse response at `t` symbol periods.
///
/// The removable singularities at `t = 0` and `|t| = 1/(4β)` use their limits.
pub fn srrc_shape(t: f64, beta: f64) -> f64 {
    if t.abs() < 1e-12 {
        return 1.0 - beta + 4.0 * beta / PI;
    }
    let q = 4.0 * beta * t;
    if (q.abs() - 1.0).abs() < 1e-9 {
        let a = PI / (4.0 * beta);
        return beta * FRAC_1_SQRT_2 * ((1.0 + 2.0 / PI) * a.sin() + (1.0 - 2.0 / PI) * a.cos());
    }
    let num = (PI * t * (1.0 - beta)).sin() + q * (PI * t * (1.0 + beta)).cos();
    num / (PI * t * (1.0 - q * q))
}

/// Truncated SRRC pulse scaled so its samples at `samples_per_symbol` have unit energy.
#[derive(Debug, Clone, Copy)]
pub struct SrrcPulse {
    beta: f64,
    span: usize,
    scale: f64,
}

impl SrrcPulse {
    pub fn new(beta: f64, span: usize, samples_per_symbol: usize) -> Result<Self> {
        check_rolloff(beta)?;
        if span < 4 {
            return Err(invalid("pulse_span", "must be at least 4 symbols"));
        }
        if samples_per_symbol < 2 {
            return Err(invalid("samples_per_symbol", "must be at least 2"));
        }
        let half = (span * samples_per_symbol) as i64;
        let energy: f64 = (-half..=half)
            .map(|k| srrc_shape(k as f64 / samples_per_symbol as f64, beta).powi(2))
            .sum();
        Ok(Self {
            beta,
            span,
            scale: energy.sqrt().recip(),
        })
    }

    /// Pulse value at `t` symbol periods from its centre; zero beyond the span.
    pub fn eval(&self, t: f64) -> f64 {
        if t.abs() > self.span as f64 {
            0.0
        } else {
            self.scale * srrc_shape(t, self.beta)
        }
    }
}

/// Unit-energy, odd-length, even-symmetric SRRC taps.
pub fn srrc_taps(rolloff: f64, span: usize, samples_per_symbol: usize) -> Result<Vec<f64>> {
    let pulse = SrrcPulse::new(rolloff, span, samples_per_symbol)?;
    let half = (span * samples_per_symbol) as i64;
    let sps = samples_per_symbol as f64;
    let mut taps: Vec<f64> = (-half..=half).map(|k| pulse.eval(k as f64 / sps)).collect();
    // Force exact symmetry; the two halves differ only by rounding.
    let n = taps.len();
    for k in 0..n / 2 {
        let avg = 0.5 * (taps[k] + taps[n - 1 - k]);
        taps[k] = avg;
        taps[n - 1 - k] = avg;
    }
    Ok(taps)
}

/// Receiver samples of the transmitted pulse train under a skewed sampling clock.
///
/// Sample `k` is taken at `t_k = (k Ts + rx_phase) / (1 + rx_skew)`: the
/// receiver's sample clock runs at `(1 + rx_skew)` times its nominal rate, so
/// each symbol spans `(1 + rx_skew) * samples_per_symbol` receiver samples.
/// Samples cover the transmission window `[0, (n + 2 span) T)`.
pub fn synthesize_rx_samples(
    symbols: &SymbolSequence,
    cfg: &PhyConfig,
    rx_skew: f64,
    rx_phase: f64,
    noise_seed: Option<u64>,
) -> Result<SampleStream> {
    cfg.validate()?;
    check_skew(rx_skew)?;
    let t_sym = cfg.symbol_period();
    if !(rx_phase.is_finite() && rx_phase.abs() < t_sym) {
        return Err(invalid(
            "rx_phase",
            format!("|{rx_phase}| must be below one symbol period {t_sym}"),
        ));
    }
    let pulse = SrrcPulse::new(cfg.rolloff, cfg.pulse_span, cfg.samples_per_symbol)?;
    let span = cfg.pulse_span as f64;
    let sps = cfg.samples_per_symbol as f64;
    let phase = rx_phase / t_sym;
    let stretch = 1.0 + rx_skew;
    let window = (symbols.len() + 2 * cfg.pulse_span) as f64;
    let data = symbols.symbols();

    // k such that (k / sps + phase) / stretch < window.
    let n_samples = ((window * stretch - phase) * sps).ceil().max(0.0) as usize;
    let mut samples = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let u = (k as f64 / sps + phase) / stretch;
        // symbol m is centred at m + span; support |u - m - span| <= span
        let m_lo = (u - 2.0 * span).ceil().max(0.0) as usize;
        let m_end = ((u.floor() + 1.0).max(0.0) as usize).min(data.len());
        let acc: f64 = (m_lo..m_end)
            .map(|m| f64::from(data[m]) * pulse.eval(u - m as f64 - span))
            .sum();
        samples.push(acc);
    }

    if let Some(db) = cfg.es_over_n0_db {
        // Unit-energy pulses give Es = 1 per symbol; real noise has variance N0/2.
        let es_n0 = 10f64.powf(db / 10.0);
        let sigma = (0.5 / es_n0).sqrt();
        let normal =
            Normal::new(0.0, sigma).map_err(|e| invalid("es_over_n0_db", e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(noise_seed.unwrap_or(0));
        for x in &mut samples {
            *x += normal.sample(&mut rng);
        }
    }

    SampleStream::new(samples, cfg.sample_rate())
}
