//! Runs one scenario from TOML text and exports its report and trace.
//!
//!     cargo run --example scenario -- [out_dir]

use physkew::sim::{export_report, render_report, run_scenario, Scenario};

const SCENARIO: &str = r#"
label = "noisy-demo"
hardware_skew = -1.2385e-3
seed = 42
rx_phase = "random"

[phy]
n_symbols = 4000
es_over_n0_db = 20.0

[loop]
loop_bandwidth_norm = 0.01
"#;

fn main() -> physkew::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "scenario_out".into());
    let s = Scenario::from_toml(SCENARIO).expect("scenario text is valid");
    let outcome = run_scenario(&s)?;
    print!("{}", render_report(&outcome.report));
    let (_, path) = export_report(&outcome, &dir)?;
    println!("report written to {}", path.display());
    Ok(())
}
