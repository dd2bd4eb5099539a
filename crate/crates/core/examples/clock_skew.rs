//! Two free-running clocks, their tick counts over a window, and the skew
//! recovered from those counts.

use physkew::clock::{residual_after_correction, skew_from_counts, ClockModel, TickCount};

fn main() -> physkew::Result<()> {
    let tx = ClockModel::ideal(200.0)?;
    let rx = ClockModel::new(200.0, -4.9751e-3, 0.0)?;

    let tx_ticks = tx.ticks_in(0.0, 500.0)?;
    let rx_ticks = rx.ticks_in(0.0, 500.0)?;
    println!("tx ticks {}..{}", tx_ticks.first_tick, tx_ticks.last_tick);
    println!("rx ticks {}..{}", rx_ticks.first_tick, rx_ticks.last_tick);

    let est = skew_from_counts(tx_ticks, rx_ticks)?;
    println!("skew from counts   {est:.6e}");
    println!("configured skew    {:.6e}", rx.skew());

    // counts as logged by a pair of nodes
    let logged = skew_from_counts(TickCount::new(1, 100_000)?, TickCount::new(1, 100_499)?)?;
    let res = residual_after_correction(rx.skew(), logged);
    println!(
        "logged counts skew {logged:.4e}, off by {:.3}%",
        res.percent.unwrap_or(0.0)
    );
    Ok(())
}
