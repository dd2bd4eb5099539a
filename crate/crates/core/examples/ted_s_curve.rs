//! Open-loop S-curve of the zero-crossing detector and the gain used to
//! design the loop filter.

use physkew::timing::{design_loop_gains, measure_ted_gain};
use physkew::waveform::PhyConfig;

fn main() -> physkew::Result<()> {
    let phy = PhyConfig::default();
    let cal = measure_ted_gain(&phy, 11)?;
    println!("{:>8} {:>12} {:>10}", "offset", "mean e", "std");
    for p in &cal.points {
        println!(
            "{:>8.3} {:>12.6} {:>10.2e}",
            p.offset, p.mean_error, p.std_error
        );
    }
    println!("kp = {:.5}", cal.kp);

    for bnt in [0.005, 0.01, 0.02] {
        let (k1, k2) = design_loop_gains(bnt, std::f64::consts::FRAC_1_SQRT_2, cal.kp, 2)?;
        println!("BnT {bnt}: k1 {k1:.5e} k2 {k2:.5e}");
    }
    Ok(())
}
