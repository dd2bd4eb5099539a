//! Timing-bound driven packet sizing and first-order radio energy.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Circuit energy per bit, joules.
pub const DEFAULT_CIRCUIT_ENERGY: f64 = 50e-9;
/// Amplifier energy per bit per square metre, joules.
pub const DEFAULT_AMP_GAIN: f64 = 100e-12;
/// `1 / (2√2 π)`, the factor turning the bound into a symbol count.
pub const SYMBOL_COUNT_COEFF: f64 = 0.5 * std::f64::consts::FRAC_1_SQRT_2 / PI;

fn positive(what: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(invalid(what, format!("{x} must be positive")))
    }
}

fn non_negative(what: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(invalid(what, format!("{x} must be non-negative")))
    }
}

fn default_ec() -> f64 {
    DEFAULT_CIRCUIT_ENERGY
}

fn default_eps() -> f64 {
    DEFAULT_AMP_GAIN
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkBudgetInput {
    /// Loop parameter `ξ`.
    pub xi: f64,
    /// Linear `Es/N0`.
    pub es_over_n0: f64,
    pub crlb_target: f64,
    /// Seconds.
    pub transmission_time: f64,
    pub phase_symbols: u64,
    /// `α`.
    pub samples_per_symbol: u32,
    /// `β`.
    pub bits_per_sample: u32,
    pub distance_m: f64,
    #[serde(default = "default_ec")]
    pub circuit_energy_per_bit: f64,
    #[serde(default = "default_eps")]
    pub amp_gain: f64,
}

impl LinkBudgetInput {
    pub fn validate(&self) -> Result<()> {
        positive("xi", self.xi)?;
        positive("es_over_n0", self.es_over_n0)?;
        positive("crlb_target", self.crlb_target)?;
        positive("transmission_time", self.transmission_time)?;
        if self.samples_per_symbol == 0 {
            return Err(invalid("samples_per_symbol", "must be at least 1"));
        }
        if self.bits_per_sample == 0 {
            return Err(invalid("bits_per_sample", "must be at least 1"));
        }
        non_negative("distance_m", self.distance_m)?;
        positive("circuit_energy_per_bit", self.circuit_energy_per_bit)?;
        positive("amp_gain", self.amp_gain)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub crlb: f64,
    /// Symbols per second.
    pub required_rate: f64,
    pub n_skew_symbols: u64,
    pub total_symbols: u64,
    pub total_bits: u64,
    /// Joules.
    pub tx_energy: f64,
    pub rx_energy: f64,
    /// Proposed one-packet energy over the two-packet baseline.
    pub baseline_ratio: f64,
}

/// `1 / (8π² ξ R² Es/N0)`.
pub fn crlb_skew(xi: f64, rate: f64, es_over_n0: f64) -> Result<f64> {
    positive("xi", xi)?;
    positive("rate", rate)?;
    positive("es_over_n0", es_over_n0)?;
    Ok(1.0 / (8.0 * PI * PI * xi * rate * rate * es_over_n0))
}

/// Symbol rate at which the bound equals `crlb_target`.
pub fn required_rate(xi: f64, crlb_target: f64, es_over_n0: f64) -> Result<f64> {
    positive("xi", xi)?;
    positive("crlb_target", crlb_target)?;
    positive("es_over_n0", es_over_n0)?;
    Ok((1.0 / (8.0 * PI * PI * xi * crlb_target * es_over_n0)).sqrt())
}

/// `N_S = T_T / (2√2 π) √(1/(ξ CRLB Es/N0))`, which equals `R T_T`.
pub fn required_symbols(
    transmission_time: f64,
    xi: f64,
    crlb_target: f64,
    es_over_n0: f64,
) -> Result<f64> {
    positive("transmission_time", transmission_time)?;
    positive("xi", xi)?;
    positive("crlb_target", crlb_target)?;
    positive("es_over_n0", es_over_n0)?;
    Ok(SYMBOL_COUNT_COEFF * transmission_time * (1.0 / (xi * crlb_target * es_over_n0)).sqrt())
}

/// `T_S = N_S + P_S` and `T_b = α β T_S`.
pub fn packet_totals(n_skew_symbols: u64, phase_symbols: u64, alpha: u32, beta: u32) -> (u64, u64) {
    let ts = n_skew_symbols + phase_symbols;
    (ts, u64::from(alpha) * u64::from(beta) * ts)
}

/// `E_c T_b + ε T_b x²`.
pub fn tx_energy(total_bits: u64, distance_m: f64, e_c: f64, epsilon: f64) -> f64 {
    let tb = total_bits as f64;
    e_c * tb + epsilon * tb * distance_m * distance_m
}

/// `E_c T_b`.
pub fn rx_energy(total_bits: u64, e_c: f64) -> f64 {
    e_c * total_bits as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineComparison {
    pub proposed_tx: f64,
    pub proposed_rx: f64,
    pub baseline_packets: u32,
    pub baseline_bits: u64,
    pub baseline_tx_per_packet: f64,
    pub baseline_rx_per_packet: f64,
    pub ratio: f64,
}

/// One proposed packet of `proposed_bits` against `baseline_packets`
/// exchanges of `baseline_bits` each (same size when `None`).
pub fn compare_with_baseline(
    input: &LinkBudgetInput,
    proposed_bits: u64,
    baseline_packets: u32,
    baseline_bits: Option<u64>,
) -> Result<BaselineComparison> {
    input.validate()?;
    if baseline_packets < 2 {
        return Err(invalid(
            "baseline_packets",
            "the baseline needs at least two packets",
        ));
    }
    let baseline_bits = baseline_bits.unwrap_or(proposed_bits);
    let (ec, eps, x) = (
        input.circuit_energy_per_bit,
        input.amp_gain,
        input.distance_m,
    );
    let proposed_tx = tx_energy(proposed_bits, x, ec, eps);
    let proposed_rx = rx_energy(proposed_bits, ec);
    let baseline_tx_per_packet = tx_energy(baseline_bits, x, ec, eps);
    let baseline_rx_per_packet = rx_energy(baseline_bits, ec);
    let baseline = f64::from(baseline_packets) * (baseline_tx_per_packet + baseline_rx_per_packet);
    if baseline <= 0.0 {
        return Err(invalid("baseline_bits", "baseline packets carry no bits"));
    }
    Ok(BaselineComparison {
        proposed_tx,
        proposed_rx,
        baseline_packets,
        baseline_bits,
        baseline_tx_per_packet,
        baseline_rx_per_packet,
        ratio: (proposed_tx + proposed_rx) / baseline,
    })
}

/// Full budget for one packet sized to meet the bound, against a
/// two-packet baseline of the same size.
pub fn energy_report(input: &LinkBudgetInput) -> Result<EnergyReport> {
    input.validate()?;
    let rate = required_rate(input.xi, input.crlb_target, input.es_over_n0)?;
    let ns = required_symbols(
        input.transmission_time,
        input.xi,
        input.crlb_target,
        input.es_over_n0,
    )?
    .ceil() as u64;
    let (ts, tb) = packet_totals(
        ns,
        input.phase_symbols,
        input.samples_per_symbol,
        input.bits_per_sample,
    );
    let cmp = compare_with_baseline(input, tb, 2, None)?;
    Ok(EnergyReport {
        crlb: crlb_skew(input.xi, rate, input.es_over_n0)?,
        required_rate: rate,
        n_skew_symbols: ns,
        total_symbols: ts,
        total_bits: tb,
        tx_energy: cmp.proposed_tx,
        rx_energy: cmp.proposed_rx,
        baseline_ratio: cmp.ratio,
    })
}
