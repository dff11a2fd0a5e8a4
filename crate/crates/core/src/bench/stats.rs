//! Summary statistics over positive run times.
//!
//! Logarithms are taken relative to the largest sample, so multiplying every
//! sample by a power of two changes no intermediate except the final factor.

use statrs::distribution::{ContinuousCDF, StudentsT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("samples must be positive and finite")]
    NonPositive,
}

fn log_ratios(samples: &[f64], needed: usize) -> Result<(f64, Vec<f64>), StatsError> {
    if samples.len() < needed {
        return Err(StatsError::InsufficientSamples { needed, got: samples.len() });
    }
    if samples.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
        return Err(StatsError::NonPositive);
    }
    let max = samples.iter().copied().fold(f64::MIN, f64::max);
    Ok((max, samples.iter().map(|&s| (s / max).ln()).collect()))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn geometric_mean(samples: &[f64]) -> Result<f64, StatsError> {
    let (max, logs) = log_ratios(samples, 1)?;
    Ok(max * mean(&logs).exp())
}

/// Half-width of the two-sided confidence interval around the geometric mean,
/// from a Student-t interval on the log samples mapped back to seconds as
/// `gm * (exp(h) - 1)`.
pub fn ci_half_width(samples: &[f64], level: f64) -> Result<f64, StatsError> {
    let (max, logs) = log_ratios(samples, 2)?;
    let n = logs.len() as f64;
    let m = mean(&logs);
    let var = logs.iter().map(|l| (l - m).powi(2)).sum::<f64>() / (n - 1.0);
    if var == 0.0 {
        return Ok(0.0);
    }
    let t = StudentsT::new(0.0, 1.0, n - 1.0).expect("positive degrees of freedom");
    let q = t.inverse_cdf(0.5 + level / 2.0);
    let h = q * (var / n).sqrt();
    Ok(max * m.exp() * h.exp_m1())
}
