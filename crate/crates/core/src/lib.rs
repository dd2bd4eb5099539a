//! Clock skew estimation from physical-layer symbol timing recovery.
//!
//! A binary PAM link is simulated with the receiver sampling under a skewed
//! clock. A feedback timing loop recovers the symbols, and the slope of its
//! fractional interval gives the skew, which then corrects the receiver's
//! application clock. Bayesian fusion over several packets and an energy
//! budget for the approach are included.

pub mod bayes;
pub mod clock;
pub mod energy;
pub mod error;
pub mod sim;
pub mod skew;
pub mod timing;
pub mod waveform;

pub use error::{Error, Result};

/// Formats `x` in scientific notation with at least `digits` significant
/// digits. More are printed when needed for the text to parse back to
/// exactly `x`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    let shortest = format!("{x:e}");
    let mantissa = shortest.split('e').next().unwrap_or("");
    let significant = mantissa.chars().filter(char::is_ascii_digit).count();
    if significant >= digits || !x.is_finite() {
        shortest
    } else {
        format!("{:.*e}", digits.saturating_sub(1), x)
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_sig;

    #[test]
    fn pads_to_requested_digits() {
        assert_eq!(fmt_sig(0.005, 6), "5.00000e-3");
        assert_eq!(fmt_sig(-4.9751e-3, 6), "-4.97510e-3");
        assert_eq!(fmt_sig(0.0, 3), "0.00e0");
    }

    #[test]
    fn round_trips_exactly() {
        for x in [1.0 / 3.0, -9.900990099009901e-3, 6.02e23, 1e-300] {
            let s = fmt_sig(x, 12);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }
}
