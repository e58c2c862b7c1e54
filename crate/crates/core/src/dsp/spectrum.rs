use serde::{Deserialize, Serialize};

use super::fft::forward_real;

/// One-sided magnitude spectrum on an explicit frequency axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBins {
    pub frequencies_hz: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub resolution_hz: f64,
}

impl SpectrumBins {
    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn max_frequency_hz(&self) -> f64 {
        self.frequencies_hz.last().copied().unwrap_or(0.0)
    }

    /// Index of the bin closest to `freq_hz`.
    pub fn nearest_bin(&self, freq_hz: f64) -> usize {
        let k = (freq_hz / self.resolution_hz).round();
        (k.max(0.0) as usize).min(self.len().saturating_sub(1))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SpectrumBins {
        SpectrumBins {
            frequencies_hz: self.frequencies_hz.clone(),
            magnitudes: self.magnitudes.iter().map(|&m| f(m)).collect(),
            resolution_hz: self.resolution_hz,
        }
    }
}

/// One-sided amplitude spectrum. A unit-amplitude sinusoid centred on a bin
/// reads 1.0 there; the DC bin carries the mean.
///
/// Panics if `values.len() < 2`.
pub fn magnitude_spectrum(values: &[f64], design_rate_hz: f64) -> SpectrumBins {
    let n = values.len();
    assert!(n >= 2, "magnitude_spectrum needs at least two values");
    let spec = forward_real(values);
    let half = n / 2;
    let nf = n as f64;
    let resolution_hz = design_rate_hz / nf;
    let magnitudes = (0..=half)
        .map(|k| {
            let m = spec[k].norm() / nf;
            if k == 0 || (n.is_multiple_of(2) && k == half) {
                m
            } else {
                2.0 * m
            }
        })
        .collect();
    SpectrumBins {
        frequencies_hz: (0..=half).map(|k| k as f64 * resolution_hz).collect(),
        magnitudes,
        resolution_hz,
    }
}
