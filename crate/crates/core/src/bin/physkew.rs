use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Deserialize;

use physkew::bayes::{fuse_packets, PacketObservations, PriorVariance};
use physkew::energy::{crlb_skew, rx_energy, tx_energy, DEFAULT_AMP_GAIN, DEFAULT_CIRCUIT_ENERGY};
use physkew::sim::{export_report, render_report, reproduce_tables, run_scenario, Scenario};
use physkew::skew::DEFAULT_DISCARD;
use physkew::timing::FractionalIntervalTrace;

#[derive(Parser)]
#[command(version, about = "Clock skew from symbol timing recovery")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one scenario file.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the eight built-in skew scenarios.
    Tables {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Timing bound for the given loop parameter, symbol rate and Es/N0.
    Crlb {
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        rate: f64,
        #[arg(long = "esn0-db", allow_hyphen_values = true)]
        esn0_db: f64,
    },
    /// Transmit and receive energy of one packet.
    Energy {
        #[arg(long)]
        bits: u64,
        #[arg(long)]
        distance: f64,
        #[arg(long, default_value_t = DEFAULT_CIRCUIT_ENERGY)]
        ec: f64,
        #[arg(long, default_value_t = DEFAULT_AMP_GAIN)]
        eps: f64,
    },
    /// Combine per-packet skew observations with a prior from trace files.
    Fuse {
        #[arg(long, num_args = 1.., required = true)]
        traces: Vec<PathBuf>,
        #[arg(long)]
        obs: PathBuf,
        #[arg(long, default_value_t = 2)]
        loop_sps: usize,
        #[arg(long, default_value_t = DEFAULT_DISCARD)]
        discard: usize,
        /// `verbatim` (sample minus slope) or `residual` (about the fitted line).
        #[arg(long, default_value = "verbatim")]
        prior_variance: PriorVariance,
    },
}

/// Observation file: `values = [...]` and optionally `noise_variance`, or
/// `fallback_variance` used when fewer than three values are given.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ObsFile {
    values: Vec<f64>,
    noise_variance: Option<f64>,
    fallback_variance: Option<f64>,
}

fn kv(key: &str, x: f64) {
    println!("{key} = {x:.9e}");
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Simulate {
            scenario,
            seed,
            out,
        } => {
            let mut s = Scenario::load(&scenario)?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            let outcome = run_scenario(&s)?;
            let report = match out {
                Some(dir) => {
                    let (report, path) = export_report(&outcome, &dir)?;
                    eprintln!("wrote {}", path.display());
                    report
                }
                None => outcome.report,
            };
            print!("{}", render_report(&report));
            Ok(report.passed)
        }
        Cmd::Tables { out } => {
            let tables = reproduce_tables(out.as_deref())?;
            println!(
                "{:<6} {:>13} {:>13} {:>13} {:>10} {:>7} status",
                "row", "hardware", "app_layer", "phy_layer", "error_%", "symerr"
            );
            for row in &tables.rows {
                match &row.outcome {
                    Ok(r) => println!(
                        "{:<6} {:>13.4e} {:>13.4e} {:>13.4e} {:>10.4} {:>7} {}",
                        row.label,
                        r.configured_hardware_skew,
                        r.app_layer_skew,
                        r.phy_layer_skew,
                        r.hardware_percent_error.unwrap_or(0.0),
                        r.symbol_errors,
                        if r.passed { "pass" } else { "FAIL" }
                    ),
                    Err(e) => println!("{:<6} {:>13.4e} FAIL {e}", row.label, row.configured_skew),
                }
            }
            Ok(tables.all_passed())
        }
        Cmd::Crlb { xi, rate, esn0_db } => {
            kv("crlb", crlb_skew(xi, rate, 10f64.powf(esn0_db / 10.0))?);
            Ok(true)
        }
        Cmd::Energy {
            bits,
            distance,
            ec,
            eps,
        } => {
            let tx = tx_energy(bits, distance, ec, eps);
            let rx = rx_energy(bits, ec);
            kv("tx_energy", tx);
            kv("rx_energy", rx);
            kv("total_energy", tx + rx);
            Ok(true)
        }
        Cmd::Fuse {
            traces,
            obs,
            loop_sps,
            discard,
            prior_variance,
        } => {
            let traces = traces
                .iter()
                .map(|p| FractionalIntervalTrace::read_csv(p, loop_sps))
                .collect::<physkew::Result<Vec<_>>>()?;
            let text = std::fs::read_to_string(&obs).with_context(|| obs.display().to_string())?;
            let file: ObsFile = toml::from_str(&text).with_context(|| obs.display().to_string())?;
            let observations = match file.noise_variance {
                Some(v) => PacketObservations::new(file.values, v)?,
                None => PacketObservations::with_sample_variance(
                    file.values,
                    file.fallback_variance
                        .context("need noise_variance or fallback_variance")?,
                )?,
            };
            let f = fuse_packets(&traces, &observations, discard, prior_variance)?;
            kv("prior_mean", f.prior.mean);
            kv("prior_variance", f.prior.variance);
            kv("observation_mean", observations.mean());
            kv("noise_variance", observations.noise_variance());
            println!("packets = {}", observations.len());
            kv("mmse_estimate", f.estimate);
            kv("bayesian_mse", f.bayesian_mse);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
