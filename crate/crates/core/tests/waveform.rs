use physkew::waveform::{srrc_taps, synthesize_rx_samples, PhyConfig, SymbolSequence};

/// Zero-stuffed symbols convolved with the taps, aligned so symbol `m`
/// peaks at sample `(m + span) * sps`.
fn upsample_and_filter(symbols: &[i8], taps: &[f64], sps: usize, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (m, &a) in symbols.iter().enumerate() {
        for (j, &h) in taps.iter().enumerate() {
            let k = m * sps + j;
            if k < len {
                out[k] += f64::from(a) * h;
            }
        }
    }
    out
}

#[test]
fn direct_synthesis_matches_upsample_and_filter() {
    for (sps, beta, span) in [(8, 0.5, 10), (4, 0.35, 6), (8, 1.0, 8)] {
        let cfg = PhyConfig {
            samples_per_symbol: sps,
            rolloff: beta,
            pulse_span: span,
            n_symbols: 400,
            ..PhyConfig::default()
        };
        let syms = SymbolSequence::generate(cfg.n_symbols, 5).unwrap();
        let rx = synthesize_rx_samples(&syms, &cfg, 0.0, 0.0, None).unwrap();
        let taps = srrc_taps(beta, span, sps).unwrap();
        let oracle = upsample_and_filter(syms.symbols(), &taps, sps, rx.len());
        let worst = rx
            .samples()
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "sps {sps} beta {beta}: {worst:e}");
    }
}

#[test]
fn measured_snr_matches_configuration() {
    for db in [0.0, 10.0, 20.0] {
        let cfg = PhyConfig {
            n_symbols: 12_000,
            es_over_n0_db: Some(db),
            ..PhyConfig::default()
        };
        let clean_cfg = PhyConfig {
            es_over_n0_db: None,
            ..cfg.clone()
        };
        let syms = SymbolSequence::generate(cfg.n_symbols, 8).unwrap();
        let noisy = synthesize_rx_samples(&syms, &cfg, 0.0, 0.0, Some(77)).unwrap();
        let clean = synthesize_rx_samples(&syms, &clean_cfg, 0.0, 0.0, None).unwrap();
        let es = clean.samples().iter().map(|x| x * x).sum::<f64>() / cfg.n_symbols as f64;
        let n = noisy.len() as f64;
        let noise_var = noisy
            .samples()
            .iter()
            .zip(clean.samples())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            / n;
        // real noise of variance N0/2 per sample
        let measured = 10.0 * (es / (2.0 * noise_var)).log10();
        assert!(
            (measured - db).abs() < 0.3,
            "{db} dB configured, {measured} measured"
        );

        let again = synthesize_rx_samples(&syms, &cfg, 0.0, 0.0, Some(77)).unwrap();
        assert_eq!(again, noisy);
    }
}

#[test]
fn skewed_stream_length_scales_with_skew() {
    let cfg = PhyConfig::default();
    let syms = SymbolSequence::generate(cfg.n_symbols, 1).unwrap();
    let base = synthesize_rx_samples(&syms, &cfg, 0.0, 0.0, None)
        .unwrap()
        .len() as f64;
    for tau in [-4.9751e-3, 5e-3] {
        let len = synthesize_rx_samples(&syms, &cfg, tau, 0.0, None)
            .unwrap()
            .len() as f64;
        assert!(
            (len - base * (1.0 + tau)).abs() <= 1.0,
            "{tau}: {len} vs {base}"
        );
    }
}
