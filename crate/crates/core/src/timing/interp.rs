//! Farrow-structure polynomial interpolators over a four-sample window.
//!
//! The window is `[x(m-1), x(m), x(m+1), x(m+2)]` and `mu` is the fractional
//! position past the base point `x(m)`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolatorKind {
    Linear,
    /// Piecewise parabolic with the free parameter fixed at 1/2.
    PiecewiseParabolic,
    /// Cubic Lagrange.
    #[default]
    Cubic,
}

impl std::str::FromStr for InterpolatorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Self::Linear),
            "piecewise_parabolic" | "parabolic" => Ok(Self::PiecewiseParabolic),
            "cubic" => Ok(Self::Cubic),
            other => Err(format!("unknown interpolator '{other}'")),
        }
    }
}

const PARABOLIC_ALPHA: f64 = 0.5;

pub fn interpolate(window: [f64; 4], mu: f64, kind: InterpolatorKind) -> f64 {
    let [xm1, x0, x1, x2] = window;
    match kind {
        InterpolatorKind::Linear => x0 + mu * (x1 - x0),
        InterpolatorKind::PiecewiseParabolic => {
            let a = PARABOLIC_ALPHA;
            let v2 = a * (x2 - x1 - x0 + xm1);
            let v1 = -a * x2 + (1.0 + a) * x1 - (1.0 - a) * x0 - a * xm1;
            (v2 * mu + v1) * mu + x0
        }
        InterpolatorKind::Cubic => {
            // Horner form of the Lagrange polynomial through (-1, 0, 1, 2).
            let v3 = (x2 - xm1) / 6.0 + (x0 - x1) / 2.0;
            let v2 = (x1 + xm1) / 2.0 - x0;
            let v1 = x1 - x2 / 6.0 - x0 / 2.0 - xm1 / 3.0;
            ((v3 * mu + v2) * mu + v1) * mu + x0
        }
    }
}

/// Interpolates `samples` at fractional index `pos`; `None` if the window
/// would leave the slice.
pub fn interpolate_at(samples: &[f64], pos: f64, kind: InterpolatorKind) -> Option<f64> {
    let base = pos.floor();
    let mu = pos - base;
    if base < 1.0 {
        return None;
    }
    let m = base as usize;
    if m + 2 >= samples.len() {
        return None;
    }
    let w = [samples[m - 1], samples[m], samples[m + 1], samples[m + 2]];
    Some(interpolate(w, mu, kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const KINDS: [InterpolatorKind; 3] = [
        InterpolatorKind::Linear,
        InterpolatorKind::PiecewiseParabolic,
        InterpolatorKind::Cubic,
    ];

    #[test]
    fn mu_zero_returns_base_point() {
        let w = [0.3, -1.7, 2.2, 0.9];
        for kind in KINDS {
            assert_eq!(interpolate(w, 0.0, kind), -1.7);
        }
    }

    #[test]
    fn cubic_reproduces_cubics() {
        let p = |t: f64| 0.7 * t * t * t - 1.3 * t * t + 0.2 * t - 4.0;
        let w = [p(-1.0), p(0.0), p(1.0), p(2.0)];
        for i in 0..100 {
            let mu = i as f64 / 100.0;
            let got = interpolate(w, mu, InterpolatorKind::Cubic);
            assert!((got - p(mu)).abs() < 1e-12, "mu {mu}: {got} vs {}", p(mu));
        }
    }

    #[test]
    fn lower_orders_reproduce_their_degree() {
        let line = |t: f64| 2.5 * t - 1.0;
        let w = [line(-1.0), line(0.0), line(1.0), line(2.0)];
        for kind in KINDS {
            assert!((interpolate(w, 0.37, kind) - line(0.37)).abs() < 1e-12);
        }
    }

    #[test]
    fn cubic_on_sine_matches_frequency_response() {
        // At mu = 1/2 the cubic Lagrange weights are (-1, 9, 9, -1)/16, so a
        // sinusoid of normalized frequency w is scaled by
        // A(w) = (9 cos(w/2) - cos(3w/2)) / 8 around the true midpoint value.
        let w = 2.0 * PI / 8.0;
        let gain = (9.0 * (w / 2.0).cos() - (1.5 * w).cos()) / 8.0;
        assert!((1.0 - gain - 8.47096e-3).abs() < 1e-8, "{gain}");
        for start in -8..8 {
            let t0 = start as f64;
            let f = |t: f64| (w * t).sin();
            let win = [f(t0 - 1.0), f(t0), f(t0 + 1.0), f(t0 + 2.0)];
            let got = interpolate(win, 0.5, InterpolatorKind::Cubic);
            let truth = f(t0 + 0.5);
            assert!((got - gain * truth).abs() < 1e-12);
            assert!((got - truth).abs() <= 1.0 - gain + 1e-12);
        }
    }

    #[test]
    fn interpolate_at_bounds() {
        let s = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(interpolate_at(&s, 0.5, InterpolatorKind::Cubic), None);
        assert_eq!(interpolate_at(&s, 3.5, InterpolatorKind::Cubic), None);
        let v = interpolate_at(&s, 1.25, InterpolatorKind::Cubic).unwrap();
        assert!((v - 1.25).abs() < 1e-12);
    }

    #[test]
    fn parses_kind_names() {
        assert_eq!("cubic".parse(), Ok(InterpolatorKind::Cubic));
        assert_eq!("linear".parse(), Ok(InterpolatorKind::Linear));
        assert!("sinc".parse::<InterpolatorKind>().is_err());
    }
}
