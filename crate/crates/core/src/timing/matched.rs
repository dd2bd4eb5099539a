//! Receive matched filter with decimation to the loop rate.

use crate::error::{invalid, Result};
use crate::waveform::SampleStream;

/// Full convolution of `rx` with `taps`, keeping every `decimation`-th output.
///
/// Output `q` is full-convolution index `q * decimation`, so its length is
/// `ceil((rx.len() + taps.len() - 1) / decimation)`. The taps are used as
/// given; SRRC taps are symmetric, so no reversal is needed.
pub fn matched_filter(rx: &SampleStream, taps: &[f64], decimation: usize) -> Result<SampleStream> {
    if rx.is_empty() {
        return Err(invalid("matched filter input", "sample stream is empty"));
    }
    if taps.is_empty() {
        return Err(invalid("matched filter taps", "tap list is empty"));
    }
    if decimation == 0 {
        return Err(invalid("decimation", "must be at least 1"));
    }
    let x = rx.samples();
    let full_len = x.len() + taps.len() - 1;
    let out: Vec<f64> = (0..full_len)
        .step_by(decimation)
        .map(|j| {
            // y[j] = Σ_i x[i] h[j - i] over the overlap
            let i_lo = j.saturating_sub(taps.len() - 1);
            let i_hi = j.min(x.len() - 1);
            (i_lo..=i_hi).map(|i| x[i] * taps[j - i]).sum()
        })
        .collect();
    SampleStream::new(out, rx.sample_rate() / decimation as f64)
}
