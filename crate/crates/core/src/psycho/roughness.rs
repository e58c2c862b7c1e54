//! Roughness after the Daniel–Weber structure.
//!
//! 47 overlapping channels at 0.5 Bark spacing each yield an envelope. Per
//! 200 ms frame, the envelope's AC part is weighted by a band-pass modulation
//! filter peaking at 70 Hz. The modulation depth of every channel is scaled by
//! the correlation of its weighted envelope with the channels 1 Bark away, so
//! broadband noise with incoherent envelopes stays smooth.

use std::sync::OnceLock;

use rustfft::num_complex::Complex64;

use super::bands::{baseband_len, frame_count, frame_ranges, smooth_len, SignalSpectrum};
use super::bark::{bark_to_hz, hz_to_bark, threshold_in_quiet_db};
use super::loudness::level_db;
use super::reference_am_tone;
use crate::dsp::fft::forward_in_place;

pub const CHANNEL_COUNT: usize = 47;
pub const CHANNEL_SPACING_BARK: f64 = 0.5;
pub const FRAME_PERIOD_S: f64 = 0.2;
pub const MAX_MODULATION_HZ: f64 = 300.0;

const FLAT_HALF_WIDTH_BARK: f64 = 0.5;
/// Attenuation of components below the channel centre.
const SLOPE_BELOW_DB_PER_BARK: f64 = 15.0;
/// Attenuation of components above the channel centre.
const SLOPE_ABOVE_DB_PER_BARK: f64 = 27.0;
const MASK_FLOOR_DB: f64 = -60.0;

fn centre_bark(i: usize) -> f64 {
    CHANNEL_SPACING_BARK * (i + 1) as f64
}

fn mask_db(dz: f64) -> f64 {
    if dz < -FLAT_HALF_WIDTH_BARK {
        SLOPE_BELOW_DB_PER_BARK * (dz + FLAT_HALF_WIDTH_BARK)
    } else if dz > FLAT_HALF_WIDTH_BARK {
        -SLOPE_ABOVE_DB_PER_BARK * (dz - FLAT_HALF_WIDTH_BARK)
    } else {
        0.0
    }
}

fn mask_extent_hz(i: usize) -> (f64, f64) {
    let z = centre_bark(i);
    let below = FLAT_HALF_WIDTH_BARK - MASK_FLOOR_DB / SLOPE_BELOW_DB_PER_BARK;
    let above = FLAT_HALF_WIDTH_BARK - MASK_FLOOR_DB / SLOPE_ABOVE_DB_PER_BARK;
    (bark_to_hz(z - below), bark_to_hz(z + above))
}

/// Weighting of modulation frequency, 1 at 70 Hz and zero above
/// [`MAX_MODULATION_HZ`].
pub fn modulation_weight(fm: f64) -> f64 {
    if fm <= 0.0 || fm > MAX_MODULATION_HZ {
        return 0.0;
    }
    let x = (fm / 70.0 - 70.0 / fm) / 1.5;
    1.0 / (1.0 + x * x).sqrt()
}

/// Carrier weighting over the Bark axis, flat between 6 and 10 Bark.
pub fn carrier_weight(z: f64) -> f64 {
    if z < 6.0 {
        (-((6.0 - z) / 6.0).powi(2)).exp()
    } else if z > 10.0 {
        (-((z - 10.0) / 12.0).powi(2)).exp()
    } else {
        1.0
    }
}

/// Weighted modulation spectrum of one channel in one frame: positive bins up
/// to the modulation limit, plus the frame's mean envelope.
struct ChannelFrame {
    bins: Vec<Complex64>,
    depth: f64,
}

fn inner(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x * y.conj()).re).sum()
}

fn correlation(a: &ChannelFrame, b: &ChannelFrame) -> f64 {
    let (ea, eb) = (inner(&a.bins, &a.bins), inner(&b.bins, &b.bins));
    if ea <= 0.0 || eb <= 0.0 {
        return 0.0;
    }
    (inner(&a.bins, &b.bins) / (ea * eb).sqrt()).max(0.0)
}

fn channel_frames(
    spec: &SignalSpectrum,
    bin_bark: &[f64],
    channel: usize,
    bank_len: usize,
    frames: &[std::ops::Range<usize>],
) -> Vec<ChannelFrame> {
    let (lo, hi) = mask_extent_hz(channel);
    let bins = spec.bin_range(lo, hi);
    let silent = || ChannelFrame {
        bins: Vec::new(),
        depth: 0.0,
    };
    if bins.is_empty() {
        return frames.iter().map(|_| silent()).collect();
    }
    let zc = centre_bark(channel);
    let gains: Vec<f64> = bins
        .clone()
        .map(|k| {
            let db = mask_db(bin_bark[k] - zc);
            if db < MASK_FLOOR_DB {
                0.0
            } else {
                (db * std::f64::consts::LN_10 / 20.0).exp()
            }
        })
        .collect();
    let y = spec.baseband(bins.start, &gains, bank_len);
    let env: Vec<f64> = y.iter().map(|c| c.norm()).collect();
    let threshold = threshold_in_quiet_db(bark_to_hz(zc));
    let rate = bank_len as f64 / spec.duration_s();

    frames
        .iter()
        .map(|r| {
            let seg = &env[r.clone()];
            let n = seg.len();
            if n < 2 {
                return silent();
            }
            let mean = seg.iter().sum::<f64>() / n as f64;
            let power = seg.iter().map(|v| v * v).sum::<f64>() / (2.0 * n as f64);
            if mean <= 0.0 || level_db(power) < threshold {
                return silent();
            }
            let mut buf: Vec<Complex64> = seg.iter().map(|&v| Complex64::new(v - mean, 0.0)).collect();
            forward_in_place(&mut buf);
            let last = ((MAX_MODULATION_HZ * n as f64 / rate).floor() as usize).min((n - 1) / 2);
            let bins: Vec<Complex64> = (1..=last)
                .map(|k| buf[k] * modulation_weight(k as f64 * rate / n as f64))
                .collect();
            // rms of the weighted AC signal, by Parseval over both half-spectra
            let rms = (2.0 * inner(&bins, &bins)).sqrt() / n as f64;
            ChannelFrame {
                bins,
                depth: (std::f64::consts::SQRT_2 * rms / mean).min(1.0),
            }
        })
        .collect()
}

/// Uncalibrated roughness per frame.
fn raw_series(spec: &SignalSpectrum, rate_hz: f64) -> Vec<f64> {
    let duration = spec.duration_s();
    let count = frame_count(duration, FRAME_PERIOD_S);
    let nyquist = rate_hz / 2.0;
    let widest = (0..CHANNEL_COUNT)
        .map(|i| {
            let (lo, hi) = mask_extent_hz(i);
            hi.min(nyquist) - lo.min(nyquist)
        })
        .fold(0.0, f64::max);
    let bank_rate = smooth_len(widest.max(1000.0).ceil() as usize) as f64;
    let bank_len = baseband_len(duration, bank_rate);
    let frames = frame_ranges(bank_len, duration, FRAME_PERIOD_S, count);
    let bin_bark: Vec<f64> = (0..spec.positive_bins().end)
        .map(|k| hz_to_bark(spec.frequency_hz(k)))
        .collect();
    let channels: Vec<Vec<ChannelFrame>> = (0..CHANNEL_COUNT)
        .map(|i| channel_frames(spec, &bin_bark, i, bank_len, &frames))
        .collect();

    (0..count)
        .map(|j| {
            let corr: Vec<f64> = (0..CHANNEL_COUNT - 2)
                .map(|i| correlation(&channels[i][j], &channels[i + 2][j]))
                .collect();
            (0..CHANNEL_COUNT)
                .map(|i| {
                    let below = i.checked_sub(2).map(|k| corr[k]);
                    let above = corr.get(i).copied();
                    let (kb, ka) = match (below, above) {
                        (Some(b), Some(a)) => (b, a),
                        (Some(b), None) => (b, b),
                        (None, Some(a)) => (a, a),
                        (None, None) => (0.0, 0.0),
                    };
                    let term = carrier_weight(centre_bark(i)) * channels[i][j].depth * kb * ka;
                    term * term
                })
                .sum()
        })
        .collect()
}

fn calibration() -> f64 {
    static CAL: OnceLock<f64> = OnceLock::new();
    *CAL.get_or_init(|| {
        let anchor = reference_am_tone(1000.0, 60.0, 70.0, 1.0, 1.0, 48000.0);
        let raw = raw_series(&SignalSpectrum::new(&anchor), 48000.0);
        1.0 / (raw.iter().sum::<f64>() / raw.len() as f64)
    })
}

pub(crate) fn series(spec: &SignalSpectrum, rate_hz: f64) -> Vec<f64> {
    let cal = calibration();
    raw_series(spec, rate_hz).into_iter().map(|r| r * cal).collect()
}
