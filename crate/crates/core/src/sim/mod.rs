//! End-to-end scenarios: synthesize a packet, recover timing, estimate skew,
//! correct the receiver's application clock and report.

mod report;
mod tables;

pub use report::{export_report, parse_report, read_report, render_report, ScenarioReport};
pub use tables::{reproduce_tables, table_scenarios, TableRow, Tables, TABLE_SKEWS};

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clock::{residual_after_correction, skew_from_counts, ClockModel};
use crate::energy::{energy_report, LinkBudgetInput};
use crate::error::{io_err, Error, Result};
use crate::skew::{correct_application_clock, estimate_skew, DEFAULT_DISCARD};
use crate::timing::{
    count_symbol_errors, run_timing_recovery, FractionalIntervalTrace, LoopConfig, LoopDesign,
};
use crate::waveform::{synthesize_rx_samples, PhyConfig, SymbolSequence};

/// Seed of the S-curve calibration when a scenario does not fix the TED gain.
pub const CALIBRATION_SEED: u64 = 0x5c0e;
/// Relative error allowed between estimated and configured skew.
pub const TOLERANCE: f64 = 0.01;
/// Absolute bound on the estimate when the configured skew is zero.
pub const ZERO_SKEW_BOUND: f64 = 1e-5;

/// Receiver sampling phase: a fixed value in seconds or drawn from the seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RxPhase {
    Seconds(f64),
    Keyword(PhaseKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKeyword {
    Random,
}

impl Default for RxPhase {
    fn default() -> Self {
        Self::Keyword(PhaseKeyword::Random)
    }
}

impl RxPhase {
    /// Phase in seconds; `random` is uniform over one symbol period.
    pub fn resolve(&self, seed: u64, symbol_period: f64) -> f64 {
        match *self {
            Self::Seconds(s) => s,
            Self::Keyword(PhaseKeyword::Random) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
                rng.random_range(0.0..symbol_period)
            }
        }
    }
}

/// Application clocks compared over a common wall-clock window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AppClock {
    pub tick_rate: f64,
    pub window_seconds: f64,
}

impl Default for AppClock {
    fn default() -> Self {
        Self {
            tick_rate: 200.0,
            window_seconds: 500.0,
        }
    }
}

fn default_discard() -> usize {
    DEFAULT_DISCARD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub label: String,
    pub hardware_skew: f64,
    #[serde(default)]
    pub rx_phase: RxPhase,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_discard")]
    pub discard: usize,
    #[serde(default)]
    pub phy: PhyConfig,
    #[serde(default, rename = "loop")]
    pub loop_design: LoopDesign,
    #[serde(default)]
    pub app_clock: AppClock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<LinkBudgetInput>,
}

impl Scenario {
    /// Table link configuration with the given skew and seed.
    pub fn new(label: impl Into<String>, hardware_skew: f64, seed: u64) -> Self {
        Self {
            label: label.into(),
            hardware_skew,
            rx_phase: RxPhase::default(),
            seed,
            discard: DEFAULT_DISCARD,
            phy: PhyConfig::default(),
            loop_design: LoopDesign::default(),
            app_clock: AppClock::default(),
            budget: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_toml(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario fields are all representable in TOML")
    }

    fn noise_seed(&self) -> u64 {
        self.seed
            .wrapping_mul(0x2545_f491_4f6c_dd1d)
            .wrapping_add(1)
    }
}

/// Report plus the trace it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub report: ScenarioReport,
    pub trace: FractionalIntervalTrace,
}

/// Runs a scenario, calibrating the TED gain if the scenario does not fix it.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioOutcome> {
    let lc = s
        .loop_design
        .resolve(&s.phy, CALIBRATION_SEED)
        .map_err(|e| wrap(s, e))?;
    run_scenario_with(s, &lc)
}

/// Runs a scenario with an already resolved loop.
pub fn run_scenario_with(s: &Scenario, lc: &LoopConfig) -> Result<ScenarioOutcome> {
    run_inner(s, lc).map_err(|e| wrap(s, e))
}

fn wrap(s: &Scenario, e: Error) -> Error {
    Error::Scenario {
        label: s.label.clone(),
        source: Box::new(e),
    }
}

fn run_inner(s: &Scenario, lc: &LoopConfig) -> Result<ScenarioOutcome> {
    s.phy.validate()?;
    let t_sym = s.phy.symbol_period();
    let rx_phase = s.rx_phase.resolve(s.seed, t_sym);
    let symbols = SymbolSequence::generate(s.phy.n_symbols, s.seed)?;
    let rx = synthesize_rx_samples(
        &symbols,
        &s.phy,
        s.hardware_skew,
        rx_phase,
        Some(s.noise_seed()),
    )?;
    let rec = run_timing_recovery(&rx, &s.phy, lc)?;
    let est = estimate_skew(&rec.trace, s.discard, Some(s.hardware_skew))?;
    let errs = count_symbol_errors(&rec.decisions, symbols.symbols(), s.discard, 4)?;

    let tx_clock = ClockModel::ideal(s.app_clock.tick_rate)?;
    let rx_clock = ClockModel::new(s.app_clock.tick_rate, s.hardware_skew, 0.0)?;
    let tx_ticks = tx_clock.ticks_in(0.0, s.app_clock.window_seconds)?;
    let rx_ticks = rx_clock.ticks_in(0.0, s.app_clock.window_seconds)?;
    let app_layer_skew = skew_from_counts(tx_ticks, rx_ticks)?;
    let corrected = correct_application_clock(&rx_clock, &est)?;
    let app_res = residual_after_correction(app_layer_skew, est.skew);
    let hw_res = residual_after_correction(s.hardware_skew, est.skew);

    let passed = if s.hardware_skew == 0.0 {
        est.skew.abs() < ZERO_SKEW_BOUND
    } else {
        hw_res.percent.is_some_and(|p| p <= 100.0 * TOLERANCE)
    };

    let report = ScenarioReport {
        label: s.label.clone(),
        seed: s.seed,
        configured_hardware_skew: s.hardware_skew,
        rx_phase,
        tx_first_tick: tx_ticks.first_tick,
        tx_last_tick: tx_ticks.last_tick,
        rx_first_tick: rx_ticks.first_tick,
        rx_last_tick: rx_ticks.last_tick,
        app_layer_skew,
        phy_layer_skew: est.skew,
        slope_per_strobe: est.slope_per_strobe,
        n_points: est.n_points,
        discarded_prefix: est.discarded_prefix,
        error_left: app_res.absolute,
        percent_error: app_res.percent,
        hardware_error: hw_res.absolute,
        hardware_percent_error: hw_res.percent,
        corrected_skew: corrected.skew(),
        ted_gain: lc.ted_gain,
        trace_length: rec.trace.len(),
        symbol_errors: errs.errors,
        symbols_compared: errs.compared,
        passed,
        trace_path: None,
        energy: s.budget.as_ref().map(energy_report).transpose()?,
    };
    Ok(ScenarioOutcome {
        report,
        trace: rec.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_scenario() {
        let s = Scenario::from_toml("label = \"x\"\nhardware_skew = -2.5e-3\n").unwrap();
        assert_eq!(s.phy, PhyConfig::default());
        assert_eq!(s.discard, DEFAULT_DISCARD);
        assert_eq!(s.rx_phase, RxPhase::default());
    }

    #[test]
    fn parses_sections_and_fixed_phase() {
        let text = r#"
label = "custom"
hardware_skew = 1.0e-3
rx_phase = 2.0e-4
seed = 9

[phy]
n_symbols = 4000
es_over_n0_db = 20.0

[loop]
loop_bandwidth_norm = 0.02
interpolator_kind = "linear"
"#;
        let s = Scenario::from_toml(text).unwrap();
        assert_eq!(s.rx_phase, RxPhase::Seconds(2.0e-4));
        assert_eq!(s.phy.n_symbols, 4000);
        assert_eq!(s.phy.samples_per_symbol, 8);
        assert_eq!(s.loop_design.loop_bandwidth_norm, 0.02);
        assert_eq!(Scenario::from_toml(&s.to_toml()).unwrap(), s);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Scenario::from_toml("label = \"x\"\nhardware_skew = 0.0\nbogus = 1\n").is_err());
    }

    #[test]
    fn random_phase_is_seeded_and_in_range() {
        let p = RxPhase::default();
        let a = p.resolve(4, 1e-3);
        assert_eq!(a, p.resolve(4, 1e-3));
        assert!((0.0..1e-3).contains(&a));
        assert_ne!(a, p.resolve(5, 1e-3));
    }

    #[test]
    fn divergence_carries_label() {
        let s = Scenario::new("bad", 0.0, 1);
        let lc = LoopDesign {
            ted_gain: Some(1.0),
            ..LoopDesign::default()
        }
        .resolve(&s.phy, 0)
        .unwrap()
        .with_gains(-5.0, 0.0)
        .unwrap();
        let err = run_scenario_with(&s, &lc).unwrap_err();
        assert!(
            matches!(err, Error::Scenario { ref label, .. } if label == "bad"),
            "{err}"
        );
        assert!(err.chain().contains("diverged"), "{}", err.chain());
    }
}
