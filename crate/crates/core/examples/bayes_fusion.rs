//! A prior built from earlier packets' traces, combined with a few noisy
//! per-packet skew estimates.

use physkew::bayes::{
    bayesian_mse, fuse_packets, mmse_weights, posterior_params, PacketObservations, PriorVariance,
    SkewPrior,
};
use physkew::skew::estimate_skew;
use physkew::timing::{run_timing_recovery, LoopDesign};
use physkew::waveform::{synthesize_rx_samples, PhyConfig, SymbolSequence};

fn main() -> physkew::Result<()> {
    // hand-sized case
    let prior = SkewPrior::new(0.0, 1.0)?;
    let obs = PacketObservations::new(vec![2.0], 1.0)?;
    let post = posterior_params(&prior, &obs);
    println!(
        "N(0,1) prior, x = 2: posterior mean {} variance {}",
        post.mean, post.variance
    );

    let skew = 1.6728e-3;
    let phy = PhyConfig {
        es_over_n0_db: Some(15.0),
        ..PhyConfig::default()
    };
    let lc = LoopDesign::default().resolve(&phy, 1)?;
    let mut traces = Vec::new();
    let mut per_packet = Vec::new();
    for seed in 1..=4 {
        let syms = SymbolSequence::generate(phy.n_symbols, seed)?;
        let rx = synthesize_rx_samples(&syms, &phy, skew, 2.0e-4, Some(seed + 100))?;
        let rec = run_timing_recovery(&rx, &phy, &lc)?;
        let est = estimate_skew(&rec.trace, 500, None)?;
        println!("packet {seed}: {:.6e}", est.skew);
        if seed <= 2 {
            traces.push(rec.trace);
        } else {
            per_packet.push(est.skew);
        }
    }

    let obs = PacketObservations::with_sample_variance(per_packet, 1e-12)?;
    for mode in [PriorVariance::SampleMinusSlope, PriorVariance::LineResidual] {
        let f = fuse_packets(&traces, &obs, 500, mode)?;
        let (wx, wp) = mmse_weights(f.prior.variance, obs.noise_variance(), obs.len());
        println!(
            "{mode:?}: prior {:.6e} (var {:.3e}), weights {wx:.3}/{wp:.3}, estimate {:.6e}, mse {:.3e}",
            f.prior.mean, f.prior.variance, f.estimate, f.bayesian_mse
        );
    }
    println!(
        "mse with 10 packets: {:.3e}",
        bayesian_mse(&prior, 10, 1.0)?
    );
    Ok(())
}
