//! The eight built-in skew scenarios, run in parallel.

use std::path::Path;

use crate::error::Result;
use crate::timing::LoopDesign;
use crate::waveform::PhyConfig;

use super::{export_report, run_scenario_with, Scenario, ScenarioReport, CALIBRATION_SEED};

/// Configured hardware skews of the built-in scenarios.
pub const TABLE_SKEWS: [f64; 8] = [
    -4.9751e-3, -2.4938e-3, -1.6639e-3, -1.2484e-3, 1.2500e-3, 1.6667e-3, 2.5000e-3, 5.0000e-3,
];

pub fn table_scenarios() -> Vec<Scenario> {
    TABLE_SKEWS
        .iter()
        .enumerate()
        .map(|(i, &tau)| Scenario::new(format!("sim{}", i + 1), tau, i as u64 + 1))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub label: String,
    pub configured_skew: f64,
    /// The report, or the error that stopped the run.
    pub outcome: Result<ScenarioReport, String>,
}

impl TableRow {
    pub fn passed(&self) -> bool {
        self.outcome.as_ref().is_ok_and(|r| r.passed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tables {
    pub rows: Vec<TableRow>,
}

impl Tables {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(TableRow::passed)
    }
}

/// Runs the built-in scenarios, one thread each, sharing a single TED
/// calibration. A failing row does not stop the others. With `out`, each
/// report and trace is exported there.
pub fn reproduce_tables(out: Option<&Path>) -> Result<Tables> {
    let scenarios = table_scenarios();
    let lc = LoopDesign::default().resolve(&PhyConfig::default(), CALIBRATION_SEED)?;
    let results: Vec<Result<ScenarioReport, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .map(|s| {
                scope.spawn(move || -> Result<ScenarioReport> {
                    let outcome = run_scenario_with(s, &lc)?;
                    match out {
                        Some(dir) => Ok(export_report(&outcome, dir)?.0),
                        None => Ok(outcome.report),
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| match h.join() {
                Ok(r) => r.map_err(|e| e.chain()),
                Err(_) => Err("scenario thread panicked".to_owned()),
            })
            .collect()
    });
    let rows = scenarios
        .into_iter()
        .zip(results)
        .map(|(s, outcome)| TableRow {
            label: s.label,
            configured_skew: s.hardware_skew,
            outcome,
        })
        .collect();
    Ok(Tables { rows })
}
