//! Skew from the slope of the unwrapped trace, then the receiver's
//! application clock corrected with it.

use physkew::clock::{residual_after_correction, ClockModel};
use physkew::skew::{correct_application_clock, estimate_skew, unwrap_mu, DEFAULT_DISCARD};
use physkew::timing::{run_timing_recovery, LoopDesign};
use physkew::waveform::{synthesize_rx_samples, PhyConfig, SymbolSequence};

fn main() -> physkew::Result<()> {
    let skew = -4.9751e-3;
    let phy = PhyConfig::default();
    let lc = LoopDesign::default().resolve(&phy, 1)?;
    let syms = SymbolSequence::generate(phy.n_symbols, 1)?;
    let rx = synthesize_rx_samples(&syms, &phy, skew, 1.0e-4, None)?;
    let rec = run_timing_recovery(&rx, &phy, &lc)?;

    let unwrapped = unwrap_mu(&rec.trace);
    println!(
        "mu drifts from {:.4} to {:.4} over {} strobes",
        unwrapped[DEFAULT_DISCARD],
        unwrapped[unwrapped.len() - 1],
        unwrapped.len()
    );

    let est = estimate_skew(&rec.trace, DEFAULT_DISCARD, Some(skew))?;
    println!("slope per strobe {:.6e}", est.slope_per_strobe);
    println!("skew estimate    {:.6e} (configured {skew:.6e})", est.skew);
    if let Some(r) = est.residual_vs_truth {
        println!(
            "error            {:.3e} ({:.4}%)",
            r.absolute,
            r.percent.unwrap_or(0.0)
        );
    }

    let app = ClockModel::new(200.0, skew, 0.0)?;
    let fixed = correct_application_clock(&app, &est)?;
    let left = residual_after_correction(0.0, fixed.skew());
    println!("rx clock skew {:.4e} -> {:.4e}", app.skew(), fixed.skew());
    println!("remaining |skew| {:.3e}", left.absolute);
    Ok(())
}
