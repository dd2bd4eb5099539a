//! Gaussian prior/posterior fusion of several cross-layer packets.
//!
//! The prior comes from one physical-layer trace (line-fit slope and a
//! spread term); the observations are per-packet skew estimates with a
//! common noise variance `σ²`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::skew::{ls_slope, unwrap_mu};
use crate::timing::FractionalIntervalTrace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkewPrior {
    pub mean: f64,
    pub variance: f64,
}

impl SkewPrior {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(invalid("prior mean", "must be finite"));
        }
        if !(variance.is_finite() && variance >= 0.0) {
            return Err(invalid(
                "prior variance",
                format!("{variance} must be finite and >= 0"),
            ));
        }
        Ok(Self { mean, variance })
    }
}

/// Per-packet skew observations `x[n]` with noise variance `σ²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketObservations {
    values: Vec<f64>,
    noise_variance: f64,
}

impl PacketObservations {
    pub fn new(values: Vec<f64>, noise_variance: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("observations", "values must be finite"));
        }
        if !(noise_variance.is_finite() && noise_variance > 0.0) {
            return Err(invalid(
                "noise_variance",
                format!("{noise_variance} must be positive"),
            ));
        }
        Ok(Self {
            values,
            noise_variance,
        })
    }

    /// Uses the sample variance of `values` when there are at least three,
    /// otherwise `fallback_variance`.
    pub fn with_sample_variance(values: Vec<f64>, fallback_variance: f64) -> Result<Self> {
        let n = values.len();
        let var = if n >= 3 {
            let mean = values.iter().sum::<f64>() / n as f64;
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            fallback_variance
        };
        Self::new(values, var)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `x̄ = Σ x[m] / N`.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkewPosterior {
    pub mean: f64,
    pub variance: f64,
}

/// How the prior spread is computed from the trace samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorVariance {
    /// `(1/N_P) Σ (P[n] - slope)²`: each sample minus the scalar slope.
    #[default]
    SampleMinusSlope,
    /// `(1/N_P) Σ (P[n] - (a + slope n))²`: residuals about the fitted line.
    LineResidual,
}

impl std::str::FromStr for PriorVariance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sample_minus_slope" | "verbatim" => Ok(Self::SampleMinusSlope),
            "line_residual" | "residual" => Ok(Self::LineResidual),
            other => Err(format!("unknown prior variance mode '{other}'")),
        }
    }
}

/// Prior from trace samples `P[n]`: mean is the least-squares slope.
pub fn prior_from_trace(samples: &[f64], mode: PriorVariance) -> Result<SkewPrior> {
    let np = samples.len();
    if np < 3 {
        return Err(Error::InsufficientData { needed: 3, got: np });
    }
    let slope = ls_slope(samples)?;
    let n = np as f64;
    let variance = match mode {
        PriorVariance::SampleMinusSlope => {
            samples.iter().map(|p| (p - slope).powi(2)).sum::<f64>() / n
        }
        PriorVariance::LineResidual => {
            let mean = samples.iter().sum::<f64>() / n;
            let intercept = mean - slope * (n - 1.0) / 2.0;
            samples
                .iter()
                .enumerate()
                .map(|(i, p)| (p - intercept - slope * i as f64).powi(2))
                .sum::<f64>()
                / n
        }
    };
    SkewPrior::new(slope, variance)
}

/// Posterior variance `1/(N/σ² + 1/σ_P²)` and mean
/// `(N x̄/σ² + μ_P/σ_P²) σ²_{P|x}`. A zero prior variance returns the prior.
pub fn posterior_params(prior: &SkewPrior, obs: &PacketObservations) -> SkewPosterior {
    if prior.variance == 0.0 {
        return SkewPosterior {
            mean: prior.mean,
            variance: 0.0,
        };
    }
    let n = obs.len() as f64;
    let s2 = obs.noise_variance();
    let variance = 1.0 / (n / s2 + 1.0 / prior.variance);
    let mean = (n * obs.mean() / s2 + prior.mean / prior.variance) * variance;
    SkewPosterior { mean, variance }
}

/// Weights `(w_x̄, w_μ)` of the MMSE combination; they sum to one.
pub fn mmse_weights(prior_variance: f64, noise_variance: f64, n: usize) -> (f64, f64) {
    let s2n = noise_variance / n as f64;
    let denom = prior_variance + s2n;
    (prior_variance / denom, s2n / denom)
}

/// `P̂ = σ_P²/(σ_P² + σ²/N) x̄ + (σ²/N)/(σ_P² + σ²/N) μ_P`.
pub fn mmse_estimate(prior: &SkewPrior, obs: &PacketObservations) -> f64 {
    let (wx, wp) = mmse_weights(prior.variance, obs.noise_variance(), obs.len());
    wx * obs.mean() + wp * prior.mean
}

/// `B_mse = (σ²/N) σ_P²/(σ_P² + σ²/N)`.
pub fn bayesian_mse(prior: &SkewPrior, n: usize, noise_variance: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if !(noise_variance.is_finite() && noise_variance > 0.0) {
        return Err(invalid("noise_variance", "must be positive"));
    }
    let s2n = noise_variance / n as f64;
    Ok(s2n * (prior.variance / (prior.variance + s2n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fusion {
    pub prior: SkewPrior,
    pub estimate: f64,
    pub bayesian_mse: f64,
}

/// Skew-scale samples from several traces, joined end to end.
///
/// Each trace is unwrapped, stripped of its first `discard` strobes and
/// divided by its loop samples per symbol, so its slope is the skew. Later
/// traces are shifted to continue from the end of the previous one.
pub fn stitch_traces(traces: &[FractionalIntervalTrace], discard: usize) -> Result<Vec<f64>> {
    if traces.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut out: Vec<f64> = Vec::new();
    for t in traces {
        let sps = t.loop_samples_per_symbol();
        if sps == 0 {
            return Err(invalid("loop_samples_per_symbol", "must be at least 1"));
        }
        if t.len() < discard + 3 {
            return Err(Error::InsufficientData {
                needed: discard + 3,
                got: t.len(),
            });
        }
        let seg: Vec<f64> = unwrap_mu(&t.skip(discard))
            .into_iter()
            .map(|m| m / sps as f64)
            .collect();
        let shift = match out.last() {
            Some(&last) => last + ls_slope(&seg)? - seg[0],
            None => 0.0,
        };
        out.extend(seg.iter().map(|v| v + shift));
    }
    Ok(out)
}

/// Prior from the stitched traces, then the MMSE estimate and its Bayesian MSE.
pub fn fuse_packets(
    traces: &[FractionalIntervalTrace],
    obs: &PacketObservations,
    discard: usize,
    mode: PriorVariance,
) -> Result<Fusion> {
    let prior = prior_from_trace(&stitch_traces(traces, discard)?, mode)?;
    Ok(Fusion {
        prior,
        estimate: mmse_estimate(&prior, obs),
        bayesian_mse: bayesian_mse(&prior, obs.len(), obs.noise_variance())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(values: &[f64], s2: f64) -> PacketObservations {
        PacketObservations::new(values.to_vec(), s2).unwrap()
    }

    #[test]
    fn posterior_hand_example() {
        let p = posterior_params(&SkewPrior::new(0.0, 1.0).unwrap(), &obs(&[2.0], 1.0));
        assert!((p.mean - 1.0).abs() < 1e-15);
        assert!((p.variance - 0.5).abs() < 1e-15);
    }

    #[test]
    fn posterior_limits() {
        let o = obs(&[1.0, 2.0, 3.0, 6.0], 0.5);
        let flat = posterior_params(&SkewPrior::new(-7.0, 1e12).unwrap(), &o);
        assert!((flat.mean - o.mean()).abs() < 1e-9);
        assert!((flat.variance - 0.5 / 4.0).abs() < 1e-9);
        let sure = posterior_params(&SkewPrior::new(-7.0, 0.0).unwrap(), &o);
        assert_eq!((sure.mean, sure.variance), (-7.0, 0.0));
        let nearly = posterior_params(&SkewPrior::new(-7.0, 1e-14).unwrap(), &o);
        assert!((nearly.mean + 7.0).abs() < 1e-9 && nearly.variance < 1e-13);
    }

    #[test]
    fn mmse_hand_example() {
        let prior = SkewPrior::new(0.0, 1.0).unwrap();
        let o = obs(&[1.0, 1.0, 1.0, 1.0], 1.0);
        assert!((mmse_estimate(&prior, &o) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn equal_weights_average() {
        let o = obs(&[3.0, 5.0], 2.0);
        let prior = SkewPrior::new(1.0, 1.0).unwrap();
        assert!((mmse_estimate(&prior, &o) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn bmse_examples() {
        let p0 = SkewPrior::new(0.0, 0.0).unwrap();
        assert_eq!(bayesian_mse(&p0, 3, 1.0).unwrap(), 0.0);
        let p1 = SkewPrior::new(0.0, 1.0).unwrap();
        assert!((bayesian_mse(&p1, 1, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(bayesian_mse(&p1, 4, 1.0).unwrap() < bayesian_mse(&p1, 1, 1.0).unwrap());
    }

    #[test]
    fn prior_on_line_and_constant() {
        let line: Vec<f64> = (0..50).map(|n| 0.25 * n as f64).collect();
        let p = prior_from_trace(&line, PriorVariance::SampleMinusSlope).unwrap();
        assert!((p.mean - 0.25).abs() < 1e-14);
        let r = prior_from_trace(&line, PriorVariance::LineResidual).unwrap();
        assert!(r.variance < 1e-24);

        let c = prior_from_trace(&[1.5; 20], PriorVariance::SampleMinusSlope).unwrap();
        assert_eq!(c.mean, 0.0);
        assert!((c.variance - 2.25).abs() < 1e-15);
        assert!(prior_from_trace(&[1.0, 2.0], PriorVariance::LineResidual).is_err());
    }

    #[test]
    fn sample_variance_fallback() {
        let o = PacketObservations::with_sample_variance(vec![1.0, 2.0], 0.3).unwrap();
        assert_eq!(o.noise_variance(), 0.3);
        let o = PacketObservations::with_sample_variance(vec![1.0, 2.0, 3.0], 0.3).unwrap();
        assert!((o.noise_variance() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_observations() {
        assert!(PacketObservations::new(vec![], 1.0).is_err());
        assert!(PacketObservations::new(vec![1.0], 0.0).is_err());
        assert!(SkewPrior::new(0.0, -1.0).is_err());
    }
}
