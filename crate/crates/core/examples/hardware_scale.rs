//! Skews of a few parts per million, as between two crystal oscillators,
//! on the embedded link configuration.

use physkew::skew::estimate_skew;
use physkew::timing::{run_timing_recovery, LoopDesign};
use physkew::waveform::{synthesize_rx_samples, PhyConfig, SymbolSequence};

fn main() -> physkew::Result<()> {
    let phy = PhyConfig::embedded();
    let lc = LoopDesign::default().resolve(&phy, 1)?;
    for (seed, skew) in [(1, 1.02e-6), (2, -1.4e-6), (3, 2.1e-6)] {
        let syms = SymbolSequence::generate(phy.n_symbols, seed)?;
        let rx = synthesize_rx_samples(&syms, &phy, skew, 5.0e-5, None)?;
        let rec = run_timing_recovery(&rx, &phy, &lc)?;
        let est = estimate_skew(&rec.trace, 2000, Some(skew))?;
        let pct = est.residual_vs_truth.and_then(|r| r.percent).unwrap_or(0.0);
        println!(
            "skew {skew:+.3e}: estimate {:+.4e} ({pct:.1}% off)",
            est.skew
        );
    }
    Ok(())
}
