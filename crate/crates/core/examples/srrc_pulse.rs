//! SRRC taps, a synthesized receive stream and the matched-filter output at
//! the symbol instants.

use physkew::timing::matched_filter;
use physkew::waveform::{srrc_taps, synthesize_rx_samples, PhyConfig, SymbolSequence};

fn main() -> physkew::Result<()> {
    let cfg = PhyConfig::default();
    let taps = srrc_taps(cfg.rolloff, cfg.pulse_span, cfg.samples_per_symbol)?;
    let energy: f64 = taps.iter().map(|h| h * h).sum();
    println!("{} taps, energy {energy:.12}", taps.len());

    // raised cosine = SRRC * SRRC; its zero crossings sit on the symbol grid
    let rc: Vec<f64> = (0..2 * taps.len() - 1)
        .map(|j| {
            let lo = j.saturating_sub(taps.len() - 1);
            let hi = j.min(taps.len() - 1);
            (lo..=hi).map(|i| taps[i] * taps[j - i]).sum()
        })
        .collect();
    let centre = taps.len() - 1;
    let isi = (1..=cfg.pulse_span * 2 - 1)
        .flat_map(|k| {
            [
                centre - k * cfg.samples_per_symbol,
                centre + k * cfg.samples_per_symbol,
            ]
        })
        .map(|j| rc[j].abs())
        .fold(0.0, f64::max);
    println!("peak {:.6}, worst ISI {isi:.3e}", rc[centre]);

    let syms = SymbolSequence::generate(cfg.n_symbols, 7)?;
    let rx = synthesize_rx_samples(&syms, &cfg, 0.0, 0.0, None)?;
    let y = matched_filter(&rx, &taps, cfg.decimation())?;
    println!("{} rx samples -> {} loop samples", rx.len(), y.len());
    for m in 0..6 {
        let q = (m + 2 * cfg.pulse_span) * cfg.loop_upsampling_factor;
        println!(
            "symbol {m}: sent {:+} filtered {:+.6}",
            syms.symbols()[m],
            y.samples()[q]
        );
    }
    Ok(())
}
