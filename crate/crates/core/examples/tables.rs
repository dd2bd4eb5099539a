//! The eight skew scenarios, run in parallel, with the application-layer
//! and symbol-timing estimates side by side.

use std::time::Instant;

use physkew::sim::reproduce_tables;

fn main() -> physkew::Result<()> {
    let t0 = Instant::now();
    let tables = reproduce_tables(None)?;
    println!(
        "{:<5} {:>12} {:>12} {:>12} {:>9} {:>5}",
        "row", "hardware", "app layer", "phy layer", "error %", "errs"
    );
    for row in &tables.rows {
        match &row.outcome {
            Ok(r) => println!(
                "{:<5} {:>12.4e} {:>12.4e} {:>12.4e} {:>9.4} {:>5}",
                row.label,
                row.configured_skew,
                r.app_layer_skew,
                r.phy_layer_skew,
                r.hardware_percent_error.unwrap_or(0.0),
                r.symbol_errors
            ),
            Err(e) => println!("{:<5} failed: {e}", row.label),
        }
    }
    println!(
        "all passed: {} in {:.2?}",
        tables.all_passed(),
        t0.elapsed()
    );
    Ok(())
}
