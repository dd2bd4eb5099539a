use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use physkew::bayes::{
    bayesian_mse, fuse_packets, mmse_estimate, prior_from_trace, stitch_traces, PacketObservations,
    PriorVariance,
};
use physkew::skew::estimate_skew;
use physkew::timing::{run_timing_recovery, FractionalIntervalTrace, LoopDesign};
use physkew::waveform::{synthesize_rx_samples, PhyConfig, SymbolSequence};

#[test]
fn residual_mode_recovers_noise_variance() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for sd in [0.01, 0.3, 2.0] {
        let noise = Normal::new(0.0, sd).unwrap();
        let p: Vec<f64> = (0..10_000)
            .map(|n| 0.37 * n as f64 + noise.sample(&mut rng))
            .collect();
        let prior = prior_from_trace(&p, PriorVariance::LineResidual).unwrap();
        assert!(
            (prior.variance / (sd * sd) - 1.0).abs() < 0.05,
            "{sd}: {}",
            prior.variance
        );
        assert!((prior.mean - 0.37).abs() < 1e-3);
    }
}

fn traces(skew: f64, seeds: std::ops::Range<u64>) -> Vec<FractionalIntervalTrace> {
    let phy = PhyConfig::default();
    let lc = LoopDesign::default().resolve(&phy, 1).unwrap();
    seeds
        .map(|seed| {
            let syms = SymbolSequence::generate(phy.n_symbols, seed).unwrap();
            let rx =
                synthesize_rx_samples(&syms, &phy, skew, 1.5e-4 * (seed % 6) as f64, None).unwrap();
            run_timing_recovery(&rx, &phy, &lc).unwrap().trace
        })
        .collect()
}

#[test]
fn fusion_is_the_composition_of_its_parts() {
    let skew = -1.6639e-3;
    let ts = traces(skew, 1..4);
    let obs = PacketObservations::new(vec![-1.66e-3, -1.67e-3, -1.665e-3], 1e-11).unwrap();
    for mode in [PriorVariance::SampleMinusSlope, PriorVariance::LineResidual] {
        let f = fuse_packets(&ts, &obs, 500, mode).unwrap();
        let prior = prior_from_trace(&stitch_traces(&ts, 500).unwrap(), mode).unwrap();
        assert_eq!(f.prior, prior);
        assert_eq!(f.estimate, mmse_estimate(&prior, &obs));
        assert_eq!(
            f.bayesian_mse,
            bayesian_mse(&prior, obs.len(), 1e-11).unwrap()
        );
    }
    let f = fuse_packets(&ts, &obs, 500, PriorVariance::LineResidual).unwrap();
    assert!((f.prior.mean / skew - 1.0).abs() < 0.01, "{}", f.prior.mean);
}

#[test]
fn stitched_slope_matches_single_trace_estimates() {
    let skew = 2.5e-3;
    let ts = traces(skew, 5..8);
    let joined = stitch_traces(&ts, 500).unwrap();
    assert_eq!(joined.len(), 3 * 2500);
    let prior = prior_from_trace(&joined, PriorVariance::LineResidual).unwrap();
    assert!((prior.mean / skew - 1.0).abs() < 0.01, "{}", prior.mean);
    for t in &ts {
        let single = estimate_skew(t, 500, None).unwrap().skew;
        assert!((single / skew - 1.0).abs() < 0.01);
    }
}

#[test]
fn matching_observation_leaves_prior_mean() {
    let ts = traces(1.25e-3, 9..10);
    let prior = prior_from_trace(
        &stitch_traces(&ts, 500).unwrap(),
        PriorVariance::LineResidual,
    )
    .unwrap();
    let obs = PacketObservations::new(vec![prior.mean], 1e-10).unwrap();
    let f = fuse_packets(&ts, &obs, 500, PriorVariance::LineResidual).unwrap();
    assert!((f.estimate - prior.mean).abs() <= 1e-18);
    let one = bayesian_mse(&prior, 1, 1e-10).unwrap();
    let four = bayesian_mse(&prior, 4, 1e-10).unwrap();
    assert!(four < one);
}
