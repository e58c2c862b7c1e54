use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Filter kernels span this many periods of the lower cutoff.
pub const PERIODS_OF_LOWER_CUTOFF: f64 = 7.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    BandPass,
    HighPass,
}

/// Linear-phase windowed-sinc FIR kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterKernel {
    taps: Vec<f64>,
    kind: FilterKind,
    lower_cutoff_hz: f64,
    upper_cutoff_hz: Option<f64>,
    design_rate_hz: f64,
}

impl FilterKernel {
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn lower_cutoff_hz(&self) -> f64 {
        self.lower_cutoff_hz
    }

    pub fn upper_cutoff_hz(&self) -> Option<f64> {
        self.upper_cutoff_hz
    }

    pub fn design_rate_hz(&self) -> f64 {
        self.design_rate_hz
    }

    /// Real-valued amplitude response at `freq_hz` with the linear-phase term
    /// factored out. Its absolute value is the magnitude response.
    pub fn amplitude_response(&self, freq_hz: f64) -> f64 {
        let mid = self.taps.len() / 2;
        let w = 2.0 * PI * freq_hz / self.design_rate_hz;
        self.taps[mid]
            + 2.0
                * (1..=mid)
                    .map(|k| self.taps[mid + k] * (w * k as f64).cos())
                    .sum::<f64>()
    }

    fn pass_center_hz(&self) -> f64 {
        match self.upper_cutoff_hz {
            Some(h) => 0.5 * (self.lower_cutoff_hz + h),
            None => 0.5 * (self.lower_cutoff_hz + 0.5 * self.design_rate_hz),
        }
    }
}

/// Largest odd integer not above `round(7.5 * design_rate / lower)`.
pub fn tap_count(lower_cutoff_hz: f64, design_rate_hz: f64) -> usize {
    let n = (PERIODS_OF_LOWER_CUTOFF * design_rate_hz / lower_cutoff_hz).round() as usize;
    if n.is_multiple_of(2) {
        n.saturating_sub(1)
    } else {
        n
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

// Hamming-windowed ideal low-pass, cutoff `fc` as a fraction of the rate.
fn windowed_lowpass(fc: f64, n: usize) -> Vec<f64> {
    let mid = (n / 2) as f64;
    let denom = (n - 1) as f64;
    (0..n)
        .map(|i| {
            let m = i as f64 - mid;
            let w = 0.54 - 0.46 * (2.0 * PI * i as f64 / denom).cos();
            2.0 * fc * sinc(2.0 * fc * m) * w
        })
        .collect()
}

/// Designs a Hamming-windowed sinc band-pass (`upper` given) or high-pass
/// kernel whose length covers 7.5 periods of the lower cutoff. Taps are
/// scaled to unit gain at the pass-band centre.
pub fn design_fir_window(
    lower_cutoff_hz: f64,
    upper_cutoff_hz: Option<f64>,
    design_rate_hz: f64,
    kind: FilterKind,
) -> Result<FilterKernel> {
    let nyquist = 0.5 * design_rate_hz;
    if !(lower_cutoff_hz > 0.0 && lower_cutoff_hz < nyquist) {
        return Err(Error::InvalidCutoffs(format!(
            "lower cutoff {lower_cutoff_hz} Hz must lie in (0, {nyquist})"
        )));
    }
    match (kind, upper_cutoff_hz) {
        (FilterKind::BandPass, Some(h)) if h > lower_cutoff_hz && h < nyquist => {}
        (FilterKind::BandPass, Some(h)) => {
            return Err(Error::InvalidCutoffs(format!(
                "upper cutoff {h} Hz must lie in ({lower_cutoff_hz}, {nyquist})"
            )))
        }
        (FilterKind::BandPass, None) => return Err(Error::InvalidCutoffs("band-pass needs an upper cutoff".into())),
        (FilterKind::HighPass, Some(_)) => return Err(Error::InvalidCutoffs("high-pass takes no upper cutoff".into())),
        (FilterKind::HighPass, None) => {}
    }
    let n = tap_count(lower_cutoff_hz, design_rate_hz);
    if n < 3 {
        return Err(Error::InvalidCutoffs(format!(
            "lower cutoff {lower_cutoff_hz} Hz gives only {n} taps at {design_rate_hz} Hz"
        )));
    }
    let low = windowed_lowpass(lower_cutoff_hz / design_rate_hz, n);
    let mut taps: Vec<f64> = match upper_cutoff_hz {
        Some(h) => windowed_lowpass(h / design_rate_hz, n)
            .iter()
            .zip(&low)
            .map(|(hi, lo)| hi - lo)
            .collect(),
        None => {
            let dc: f64 = low.iter().sum();
            let mut t: Vec<f64> = low.iter().map(|v| -v / dc).collect();
            t[n / 2] += 1.0;
            t
        }
    };
    // exact symmetry regardless of rounding in the window
    for i in 0..n / 2 {
        taps[n - 1 - i] = taps[i];
    }
    let mut kernel = FilterKernel {
        taps,
        kind,
        lower_cutoff_hz,
        upper_cutoff_hz,
        design_rate_hz,
    };
    let gain = kernel.amplitude_response(kernel.pass_center_hz());
    for t in &mut kernel.taps {
        *t /= gain;
    }
    Ok(kernel)
}
