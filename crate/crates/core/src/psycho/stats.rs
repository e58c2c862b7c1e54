//! Scalar condensation of time-varying series.

use crate::error::{Error, Result};

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Ratio of the maximum to the mean.
pub fn impulse_factor(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::TooFewValues { required: 1, actual: 0 });
    }
    let m = mean(values);
    if !(m > 0.0) {
        return Err(Error::ZeroMean);
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(max / m)
}

/// Population variance (divides by N).
pub fn variance(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::TooFewValues {
            required: 2,
            actual: values.len(),
        });
    }
    let m = mean(values);
    Ok(values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / values.len() as f64)
}

/// Standardized fourth central moment; a Gaussian gives 3.
///
/// A variance below `(1e-12 · max|x|)²` counts as zero, so constant sequences
/// are rejected regardless of rounding in the mean.
pub fn kurtosis(values: &[f64]) -> Result<f64> {
    if values.len() < 4 {
        return Err(Error::TooFewValues {
            required: 4,
            actual: values.len(),
        });
    }
    let m = mean(values);
    let var = variance(values)?;
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if var <= (1e-12 * scale).powi(2) {
        return Err(Error::DegenerateVariance);
    }
    let m4 = values.iter().map(|v| (v - m).powi(4)).sum::<f64>() / values.len() as f64;
    Ok(m4 / (var * var))
}
