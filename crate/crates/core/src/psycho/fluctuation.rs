//! Fluctuation strength from slow level modulation in each critical band.
//!
//! Each band's 2 ms power series is smoothed over 50 ms, so modulation in the
//! roughness range does not reach the level series through the logarithm,
//! then converted to a level (floored at the threshold in quiet) and weighted in the modulation domain by a filter peaking at 4 Hz. The
//! instantaneous peak-to-peak excursion of the weighted series, summed over
//! bands, is the fluctuation at that frame.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rustfft::num_complex::Complex64;

use super::bark::{band_centre_hz, threshold_in_quiet_db};
use super::loudness::level_db;
use super::{loudness_frame_powers, reference_am_tone};
use crate::dsp::fft::{forward_in_place, inverse_in_place};
use crate::dsp::reflect_pad;

pub const PEAK_MODULATION_HZ: f64 = 4.0;

/// Reflection padding at both ends of a level series, in frames.
const PAD_FRAMES: usize = 250;

/// Hann smoothing applied to band powers before the level conversion, in frames.
const SMOOTHING_FRAMES: usize = 25;

/// Modulation weighting, 1 at 4 Hz.
pub fn modulation_weight(fm: f64) -> f64 {
    if fm <= 0.0 {
        return 0.0;
    }
    2.0 / (fm / PEAK_MODULATION_HZ + PEAK_MODULATION_HZ / fm)
}

/// Peak-to-peak excursion of the weighted modulation of one level series.
fn excursion(levels: &[f64], frame_rate_hz: f64) -> Vec<f64> {
    let n = levels.len();
    let mean = levels.iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = levels.iter().map(|v| v - mean).collect();
    let pad = PAD_FRAMES.min(n - 1);
    let padded = reflect_pad(&centred, pad);
    let len = padded.len();
    let mut buf: Vec<Complex64> = padded.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward_in_place(&mut buf);
    // weighting and the analytic-signal construction in one pass
    let half = len / 2;
    for (k, c) in buf.iter_mut().enumerate() {
        let factor = if k == 0 || k > half {
            0.0
        } else if len.is_multiple_of(2) && k == half {
            1.0
        } else {
            2.0
        };
        *c *= factor * modulation_weight(k as f64 * frame_rate_hz / len as f64);
    }
    inverse_in_place(&mut buf);
    buf[pad..pad + n].iter().map(|c| 2.0 * c.norm() / len as f64).collect()
}

fn smooth(powers: &[f64]) -> Vec<f64> {
    let half = SMOOTHING_FRAMES / 2;
    let w: Vec<f64> = (0..SMOOTHING_FRAMES)
        .map(|k| (PI * (k + 1) as f64 / (SMOOTHING_FRAMES + 1) as f64).sin().powi(2))
        .collect();
    let pad = half.min(powers.len() - 1);
    let padded = reflect_pad(powers, pad);
    (0..powers.len())
        .map(|j| {
            // taps that would fall beyond a very short padding are dropped
            let (mut acc, mut norm) = (0.0, 0.0);
            for (k, wk) in w.iter().enumerate() {
                if let Some(p) = (j + k + pad).checked_sub(half).and_then(|i| padded.get(i)) {
                    acc += wk * p;
                    norm += wk;
                }
            }
            acc / norm
        })
        .collect()
}

fn raw_series(frame_powers: &[Vec<f64>], frame_period_s: f64) -> Vec<f64> {
    let frames = frame_powers.first().map_or(0, Vec::len);
    let mut total = vec![0.0; frames];
    if frames < 2 {
        return total;
    }
    for (b, powers) in frame_powers.iter().enumerate() {
        let floor = threshold_in_quiet_db(band_centre_hz(b));
        let levels: Vec<f64> = smooth(powers).iter().map(|&p| level_db(p).max(floor)).collect();
        if levels.iter().all(|&l| l == floor) {
            continue;
        }
        for (t, e) in total.iter_mut().zip(excursion(&levels, 1.0 / frame_period_s)) {
            *t += e;
        }
    }
    total
}

fn calibration(frame_period_s: f64) -> f64 {
    static CAL: OnceLock<f64> = OnceLock::new();
    *CAL.get_or_init(|| {
        let anchor = reference_am_tone(1000.0, 60.0, PEAK_MODULATION_HZ, 1.0, 4.0, 48000.0);
        let powers = loudness_frame_powers(&anchor);
        let raw = raw_series(&powers, frame_period_s);
        1.0 / (raw.iter().sum::<f64>() / raw.len() as f64)
    })
}

pub(crate) fn series(frame_powers: &[Vec<f64>], frame_period_s: f64) -> Vec<f64> {
    let cal = calibration(frame_period_s);
    raw_series(frame_powers, frame_period_s)
        .into_iter()
        .map(|v| v * cal)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_is_symmetric_in_log_frequency() {
        assert!((modulation_weight(4.0) - 1.0).abs() < 1e-12);
        assert!((modulation_weight(1.0) - modulation_weight(16.0)).abs() < 1e-12);
        assert_eq!(modulation_weight(0.0), 0.0);
    }

    #[test]
    fn smoothing_keeps_a_constant_and_removes_fast_ripple() {
        let c = smooth(&[2.0; 100]);
        assert!(c.iter().all(|v| (v - 2.0).abs() < 1e-12));
        let ripple: Vec<f64> = (0..500)
            .map(|i| 1.0 + (2.0 * PI * 70.0 * i as f64 / 500.0).cos())
            .collect();
        let s = smooth(&ripple);
        assert!(s[20..480].iter().all(|v| (v - 1.0).abs() < 0.05));
    }

    #[test]
    fn excursion_of_a_4hz_sine_is_its_peak_to_peak() {
        let rate = 500.0;
        let x: Vec<f64> = (0..2000)
            .map(|i| 10.0 + 3.0 * (2.0 * PI * 4.0 * i as f64 / rate).sin())
            .collect();
        let e = excursion(&x, rate);
        for v in &e[250..1750] {
            assert!((v - 6.0).abs() < 0.05, "{v}");
        }
    }
}
