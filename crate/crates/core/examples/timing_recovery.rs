//! Runs the interpolating timing loop on a skewed stream and writes the
//! fractional-interval trace as CSV.
//!
//!     cargo run --example timing_recovery -- [out.csv]

use physkew::timing::{count_symbol_errors, run_timing_recovery, LoopDesign};
use physkew::waveform::{synthesize_rx_samples, PhyConfig, SymbolSequence};

fn main() -> physkew::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "timing_trace.csv".into());
    let phy = PhyConfig::default();
    let lc = LoopDesign::default().resolve(&phy, 1)?;
    println!("kp {:.5}  k1 {:.4e}  k2 {:.4e}", lc.ted_gain, lc.k1, lc.k2);

    let syms = SymbolSequence::generate(phy.n_symbols, 3)?;
    let rx = synthesize_rx_samples(&syms, &phy, 2.5e-3, 3.0e-4, None)?;
    let rec = run_timing_recovery(&rx, &phy, &lc)?;

    let errs = count_symbol_errors(&rec.decisions, syms.symbols(), 500, 4)?;
    println!(
        "{} strobes, {} errors in {} symbols",
        rec.trace.len(),
        errs.errors,
        errs.compared
    );
    for e in rec.trace.entries().iter().step_by(400) {
        println!(
            "cycle {:5} basepoint {:5} mu {:.6}",
            e.cycle_index, e.basepoint_index, e.mu
        );
    }
    rec.trace.write_csv(&out)?;
    println!("trace written to {out}");
    Ok(())
}
