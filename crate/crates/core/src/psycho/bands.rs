//! Frequency-domain band decomposition.
//!
//! The whole signal is transformed once. A band is selected by weighting a
//! contiguous run of positive-frequency bins, shifting it to baseband and
//! inverse transforming at a reduced length, which yields the band's complex
//! envelope sampled uniformly over the record. Scaling is such that a sinusoid
//! of amplitude `A` inside the band has `|y| = A`, so `|y|²/2` is its mean
//! square pressure.

use std::ops::Range;

use rustfft::num_complex::Complex64;

use crate::dsp::fft::{forward_real, inverse_in_place};
use crate::signal::TimeSignal;

pub(crate) struct SignalSpectrum {
    bins: Vec<Complex64>,
    n: usize,
    rate_hz: f64,
}

impl SignalSpectrum {
    pub fn new(signal: &TimeSignal) -> Self {
        Self {
            bins: forward_real(signal.samples()),
            n: signal.len(),
            rate_hz: signal.sample_rate_hz(),
        }
    }

    pub fn duration_s(&self) -> f64 {
        self.n as f64 / self.rate_hz
    }

    pub fn resolution_hz(&self) -> f64 {
        self.rate_hz / self.n as f64
    }

    /// Highest bin strictly below Nyquist.
    fn last_bin(&self) -> usize {
        (self.n - 1) / 2
    }

    pub fn frequency_hz(&self, k: usize) -> f64 {
        k as f64 * self.resolution_hz()
    }

    /// Bins with frequency in `[lo, hi)`, DC and Nyquist excluded.
    pub fn bin_range(&self, lo_hz: f64, hi_hz: f64) -> Range<usize> {
        let df = self.resolution_hz();
        let start = ((lo_hz / df).ceil() as usize).max(1);
        let end = ((hi_hz / df).ceil() as usize).min(self.last_bin() + 1);
        start..end.max(start)
    }

    pub fn positive_bins(&self) -> Range<usize> {
        1..self.last_bin() + 1
    }

    /// Mean square pressure carried by `bins`.
    pub fn power(&self, bins: Range<usize>) -> f64 {
        let scale = 2.0 / (self.n as f64 * self.n as f64);
        self.bins[bins].iter().map(|c| c.norm_sqr()).sum::<f64>() * scale
    }

    /// Complex envelope of the bins starting at `first`, each weighted by
    /// `gains[j]`, sampled at `len` points over the record. `len` must be at
    /// least `gains.len()` to avoid wrap-around.
    pub fn baseband(&self, first: usize, gains: &[f64], len: usize) -> Vec<Complex64> {
        debug_assert!(len >= gains.len());
        let scale = 2.0 / self.n as f64;
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for (j, &g) in gains.iter().enumerate() {
            buf[j] = self.bins[first + j] * (g * scale);
        }
        inverse_in_place(&mut buf);
        buf
    }
}

/// Smallest integer `>= n` with no prime factor above 5.
pub(crate) fn smooth_len(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Transform-friendly baseband length giving at least `rate_hz` samples per
/// second over `duration_s`.
pub(crate) fn baseband_len(duration_s: f64, rate_hz: f64) -> usize {
    smooth_len((duration_s * rate_hz).ceil() as usize)
}

/// Number of whole frames of `period_s` in `duration_s`.
pub(crate) fn frame_count(duration_s: f64, period_s: f64) -> usize {
    (duration_s / period_s + 1e-9).floor() as usize
}

/// Index ranges of `count` consecutive frames of `period_s` for a sequence of
/// `len` samples spread uniformly over `duration_s`.
pub(crate) fn frame_ranges(len: usize, duration_s: f64, period_s: f64, count: usize) -> Vec<Range<usize>> {
    let per_s = len as f64 / duration_s;
    let edge = |j: usize| (((j as f64 * period_s * per_s) - 1e-9).ceil().max(0.0) as usize).min(len);
    (0..count).map(|j| edge(j)..edge(j + 1)).collect()
}
