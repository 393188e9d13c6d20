use serde::{Deserialize, Serialize};

use super::ErrorOrder;
use crate::error::{Error, Result};

/// Largest gap between the fitted and the claimed power of `n` that still
/// counts as agreement.
pub const EXPONENT_TOLERANCE: f64 = 0.4;

const MIN_SAMPLES: usize = 4;

/// Outcome of fitting `|r(n)| ≈ A n^p (log n)^q` to residual samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub samples: Vec<(usize, f64)>,
    pub model: ErrorOrder,
    pub fitted_exponent: f64,
    pub fitted_log_power: u32,
    pub amplitude: f64,
    pub passed: bool,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Checks that residuals decay like the claimed `model`.
///
/// The log power `q ∈ {0, 1}` is picked by the smaller residual sum of
/// squares with the exponent pinned at the model's; the exponent is then
/// fitted freely by least squares on `log|r| − q log log n` against `log n`.
/// Passes when the fitted exponent is within ±0.4 of the model's.
pub fn residual_order_fit(samples: &[(usize, f64)], model: ErrorOrder) -> Result<ResidualReport> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    if let Some(&(n, _)) = samples.iter().find(|(n, _)| *n < 3) {
        return Err(Error::InvalidArgument(format!("residual sample at n = {n} < 3")));
    }
    let Some((p_model, _)) = model.exponents() else {
        return Err(Error::InvalidArgument("an exact model has no decay rate to fit".into()));
    };

    let log_n: Vec<f64> = samples.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let log_log: Vec<f64> = log_n.iter().map(|l| l.ln()).collect();
    let log_r: Vec<f64> = samples.iter().map(|&(_, r)| r.abs().max(1e-300).ln()).collect();

    let pinned_rss = |q: f64| -> f64 {
        let offsets: Vec<f64> = (0..samples.len())
            .map(|i| log_r[i] - p_model * log_n[i] - q * log_log[i])
            .collect();
        let m = mean(&offsets);
        offsets.iter().map(|o| (o - m).powi(2)).sum()
    };
    let q = if pinned_rss(1.0) < pinned_rss(0.0) { 1u32 } else { 0 };

    let ys: Vec<f64> = (0..samples.len())
        .map(|i| log_r[i] - q as f64 * log_log[i])
        .collect();
    let mx = mean(&log_n);
    let my = mean(&ys);
    let sxx: f64 = log_n.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = log_n.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("residual samples need distinct n".into()));
    }
    let slope = sxy / sxx;
    let amplitude = (my - slope * mx).exp();

    Ok(ResidualReport {
        samples: samples.to_vec(),
        model,
        fitted_exponent: slope,
        fitted_log_power: q,
        amplitude,
        passed: slope.is_finite() && (slope - p_model).abs() <= EXPONENT_TOLERANCE,
    })
}
