//! Scenario reports as `key = value` text.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::energy::EnergyReport;
use crate::error::{io_err, Error, Result};
use crate::fmt_sig;

use super::ScenarioOutcome;

const DIGITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioReport {
    pub label: String,
    pub seed: u64,
    pub configured_hardware_skew: f64,
    /// Seconds.
    pub rx_phase: f64,
    pub tx_first_tick: i64,
    pub tx_last_tick: i64,
    pub rx_first_tick: i64,
    pub rx_last_tick: i64,
    pub app_layer_skew: f64,
    pub phy_layer_skew: f64,
    pub slope_per_strobe: f64,
    pub n_points: usize,
    pub discarded_prefix: usize,
    /// Against the application-layer skew.
    pub error_left: f64,
    #[serde(default)]
    pub percent_error: Option<f64>,
    /// Against the configured hardware skew.
    pub hardware_error: f64,
    #[serde(default)]
    pub hardware_percent_error: Option<f64>,
    /// Receiver skew after applying the estimate.
    pub corrected_skew: f64,
    pub ted_gain: f64,
    pub trace_length: usize,
    pub symbol_errors: usize,
    pub symbols_compared: usize,
    pub passed: bool,
    #[serde(default)]
    pub trace_path: Option<String>,
    #[serde(default)]
    pub energy: Option<EnergyReport>,
}

struct Lines(String);

impl Lines {
    fn num(&mut self, key: &str, x: f64) {
        let _ = writeln!(self.0, "{key} = {}", fmt_sig(x, DIGITS));
    }

    fn int(&mut self, key: &str, x: impl std::fmt::Display) {
        let _ = writeln!(self.0, "{key} = {x}");
    }

    fn text(&mut self, key: &str, s: &str) {
        let _ = writeln!(self.0, "{key} = {}", toml::Value::String(s.to_owned()));
    }
}

/// One `key = value` line per field; the energy budget, when present, is
/// an `[energy]` section at the end.
pub fn render_report(r: &ScenarioReport) -> String {
    let mut w = Lines(String::new());
    w.text("label", &r.label);
    w.int("seed", r.seed);
    w.num("configured_hardware_skew", r.configured_hardware_skew);
    w.num("rx_phase", r.rx_phase);
    w.int("tx_first_tick", r.tx_first_tick);
    w.int("tx_last_tick", r.tx_last_tick);
    w.int("rx_first_tick", r.rx_first_tick);
    w.int("rx_last_tick", r.rx_last_tick);
    w.num("app_layer_skew", r.app_layer_skew);
    w.num("phy_layer_skew", r.phy_layer_skew);
    w.num("slope_per_strobe", r.slope_per_strobe);
    w.int("n_points", r.n_points);
    w.int("discarded_prefix", r.discarded_prefix);
    w.num("error_left", r.error_left);
    if let Some(p) = r.percent_error {
        w.num("percent_error", p);
    }
    w.num("hardware_error", r.hardware_error);
    if let Some(p) = r.hardware_percent_error {
        w.num("hardware_percent_error", p);
    }
    w.num("corrected_skew", r.corrected_skew);
    w.num("ted_gain", r.ted_gain);
    w.int("trace_length", r.trace_length);
    w.int("symbol_errors", r.symbol_errors);
    w.int("symbols_compared", r.symbols_compared);
    w.int("passed", r.passed);
    if let Some(p) = &r.trace_path {
        w.text("trace_path", p);
    }
    if let Some(e) = &r.energy {
        w.0.push_str("\n[energy]\n");
        w.num("crlb", e.crlb);
        w.num("required_rate", e.required_rate);
        w.int("n_skew_symbols", e.n_skew_symbols);
        w.int("total_symbols", e.total_symbols);
        w.int("total_bits", e.total_bits);
        w.num("tx_energy", e.tx_energy);
        w.num("rx_energy", e.rx_energy);
        w.num("baseline_ratio", e.baseline_ratio);
    }
    w.0
}

pub fn parse_report(text: &str) -> Result<ScenarioReport, toml::de::Error> {
    toml::from_str(text)
}

pub fn read_report(path: impl AsRef<Path>) -> Result<ScenarioReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_report(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

/// Writes `<label>.report` and `<label>.trace.csv` into `dir`.
///
/// The report's `trace_path` is set to the CSV file name, relative to the
/// report. Returns the updated report and the report path.
pub fn export_report(
    outcome: &ScenarioOutcome,
    dir: impl AsRef<Path>,
) -> Result<(ScenarioReport, PathBuf)> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let stem: String = outcome
        .report
        .label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    let csv_name = format!("{stem}.trace.csv");
    outcome.trace.write_csv(dir.join(&csv_name))?;
    let report = ScenarioReport {
        trace_path: Some(csv_name),
        ..outcome.report.clone()
    };
    let path = dir.join(format!("{stem}.report"));
    std::fs::write(&path, render_report(&report)).map_err(io_err(&path))?;
    Ok((report, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ScenarioReport {
        ScenarioReport {
            label: "row \"1\"".into(),
            seed: 17,
            configured_hardware_skew: -4.9751e-3,
            rx_phase: 3.1e-4,
            tx_first_tick: 1,
            tx_last_tick: 100000,
            rx_first_tick: 1,
            rx_last_tick: 100500,
            app_layer_skew: -4.975174877361964e-3,
            phy_layer_skew: -4.9702e-3,
            slope_per_strobe: -9.9404e-3,
            n_points: 2500,
            discarded_prefix: 500,
            error_left: 4.97e-6,
            percent_error: Some(0.0999),
            hardware_error: 4.9e-6,
            hardware_percent_error: None,
            corrected_skew: -5e-6,
            ted_gain: 1.3252399103865293,
            trace_length: 3000,
            symbol_errors: 0,
            symbols_compared: 2500,
            passed: true,
            trace_path: Some("row.trace.csv".into()),
            energy: Some(EnergyReport {
                crlb: 1e-10,
                required_rate: 1153.2,
                n_skew_symbols: 1154,
                total_symbols: 1178,
                total_bits: 113088,
                tx_energy: 6.78528e-3,
                rx_energy: 5.6544e-3,
                baseline_ratio: 0.5,
            }),
        }
    }

    #[test]
    fn render_parse_round_trip() {
        let r = sample();
        let text = render_report(&r);
        assert!(
            text.contains("configured_hardware_skew = -4.97510e-3\n"),
            "{text}"
        );
        assert!(text.contains("seed = 17\n"));
        assert_eq!(parse_report(&text).unwrap(), r);
        let bare = ScenarioReport {
            energy: None,
            trace_path: None,
            percent_error: None,
            ..r
        };
        assert_eq!(parse_report(&render_report(&bare)).unwrap(), bare);
    }
}
