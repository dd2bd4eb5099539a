//! Timing bound, the symbol rate and packet size needed to meet it, and the
//! radio energy of one packet against a two-way exchange.

use physkew::energy::{
    compare_with_baseline, crlb_skew, energy_report, rx_energy, tx_energy, LinkBudgetInput,
    DEFAULT_AMP_GAIN, DEFAULT_CIRCUIT_ENERGY, SYMBOL_COUNT_COEFF,
};

fn main() -> physkew::Result<()> {
    let ec = DEFAULT_CIRCUIT_ENERGY;
    let eps = DEFAULT_AMP_GAIN;
    println!(
        "1000 bits over 10 m: tx {:.3e} J, rx {:.3e} J",
        tx_energy(1000, 10.0, ec, eps),
        rx_energy(1000, ec)
    );
    println!("symbol count coefficient {SYMBOL_COUNT_COEFF:.4}");

    for db in [0.0, 10.0, 20.0] {
        let bound = crlb_skew(0.0952, 1000.0, 10f64.powf(db / 10.0))?;
        println!("bound at 1000 sym/s, {db:>4} dB: {bound:.4e}");
    }

    let input = LinkBudgetInput {
        xi: 0.0952,
        es_over_n0: 10.0,
        crlb_target: 1e-10,
        transmission_time: 1.0,
        phase_symbols: 24,
        samples_per_symbol: 8,
        bits_per_sample: 12,
        distance_m: 10.0,
        circuit_energy_per_bit: ec,
        amp_gain: eps,
    };
    let r = energy_report(&input)?;
    println!("{r:#?}");

    let big = compare_with_baseline(&input, 3 * r.total_bits, 2, Some(r.total_bits))?;
    println!("packet three times larger: ratio {:.3}", big.ratio);
    Ok(())
}
