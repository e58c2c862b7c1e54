//! Zwicker-style loudness over 24 critical bands.
//!
//! Band levels spread into an excitation pattern on a 0.1 Bark grid (fixed
//! 27 dB/Bark lower slope, level-dependent upper slope), which is compressed
//! with exponent 0.23 against the threshold in quiet and integrated over Bark.

use std::sync::OnceLock;

use super::bands::{baseband_len, frame_count, frame_ranges, SignalSpectrum};
use super::bark::{
    band_centre_hz, bark_to_hz, grid_bark, threshold_in_quiet_db, BAND_COUNT, BAND_EDGES_HZ, GRID_LEN, GRID_STEP_BARK,
};
use crate::signal::REFERENCE_PRESSURE_PA;

pub const LOWER_SLOPE_DB_PER_BARK: f64 = 27.0;
pub const EXPONENT: f64 = 0.23;

/// Baseband sampling rate of the loudness bank; wider than the widest band.
const BANK_RATE_HZ: f64 = 4000.0;

/// Reference stimulus of the sone scale.
const ANCHOR_BAND: usize = 8;
const ANCHOR_LEVEL_DB: f64 = 40.0;

/// Loudness of a stationary sound with its specific loudness pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryLoudness {
    pub total_sone: f64,
    /// Sone per Bark on a 0.1 Bark grid from 0 to 24 Bark.
    pub specific_sone_per_bark: Vec<f64>,
}

struct Grid {
    threshold_db: Vec<f64>,
    scale: f64,
}

fn grid() -> &'static Grid {
    static GRID: OnceLock<Grid> = OnceLock::new();
    GRID.get_or_init(|| {
        let threshold_db = (0..GRID_LEN)
            .map(|j| threshold_in_quiet_db(bark_to_hz(grid_bark(j))))
            .collect();
        let mut g = Grid {
            threshold_db,
            scale: 1.0,
        };
        let mut levels = [f64::NEG_INFINITY; BAND_COUNT];
        levels[ANCHOR_BAND] = ANCHOR_LEVEL_DB;
        let mut buf = vec![0.0; GRID_LEN];
        g.scale = 1.0 / specific_into(&g, &levels, &mut buf);
        g
    })
}

fn upper_slope(centre_hz: f64, level_db: f64) -> f64 {
    (24.0 + 230.0 / centre_hz - 0.2 * level_db).clamp(5.0, 40.0)
}

/// Writes unscaled specific loudness into `out`, returns its Bark integral.
fn specific_into(g: &Grid, levels_db: &[f64; BAND_COUNT], out: &mut [f64]) -> f64 {
    let mut excitation = [f64::NEG_INFINITY; GRID_LEN];
    for (i, &level) in levels_db.iter().enumerate() {
        if !level.is_finite() {
            continue;
        }
        let su = upper_slope(band_centre_hz(i), level);
        let (lo, hi) = (i as f64, (i + 1) as f64);
        for (j, e) in excitation.iter_mut().enumerate() {
            let z = grid_bark(j);
            let v = if z < lo {
                level - LOWER_SLOPE_DB_PER_BARK * (lo - z)
            } else if z < hi {
                level
            } else {
                level - su * (z - hi)
            };
            if v > *e {
                *e = v;
            }
        }
    }
    let mut total = 0.0;
    for ((o, &e), &tq) in out.iter_mut().zip(&excitation).zip(&g.threshold_db) {
        *o = if e.is_finite() {
            ((0.5 + 0.5 * 10f64.powf((e - tq) / 10.0)).powf(EXPONENT) - 1.0).max(0.0)
        } else {
            0.0
        };
        total += *o * GRID_STEP_BARK;
    }
    total
}

pub(crate) fn level_db(mean_square_pa2: f64) -> f64 {
    if mean_square_pa2 > 0.0 {
        10.0 * (mean_square_pa2 / (REFERENCE_PRESSURE_PA * REFERENCE_PRESSURE_PA)).log10()
    } else {
        f64::NEG_INFINITY
    }
}

/// Loudness from per-band mean square pressures.
pub(crate) fn loudness_from_powers(powers: &[f64; BAND_COUNT]) -> StationaryLoudness {
    let g = grid();
    let levels = powers.map(level_db);
    let mut specific = vec![0.0; GRID_LEN];
    let total = specific_into(g, &levels, &mut specific) * g.scale;
    specific.iter_mut().for_each(|v| *v *= g.scale);
    StationaryLoudness {
        total_sone: total,
        specific_sone_per_bark: specific,
    }
}

pub(crate) fn total_from_powers(powers: &[f64; BAND_COUNT], buf: &mut [f64]) -> f64 {
    let g = grid();
    specific_into(g, &powers.map(level_db), buf) * g.scale
}

pub(crate) fn band_powers(spec: &SignalSpectrum) -> [f64; BAND_COUNT] {
    std::array::from_fn(|i| spec.power(spec.bin_range(BAND_EDGES_HZ[i], BAND_EDGES_HZ[i + 1])))
}

/// Mean square pressure of every band in every frame, band-major.
pub(crate) fn band_frame_powers(spec: &SignalSpectrum, period_s: f64) -> Vec<Vec<f64>> {
    let duration = spec.duration_s();
    let frames = frame_count(duration, period_s);
    let mut out = Vec::with_capacity(BAND_COUNT);
    for i in 0..BAND_COUNT {
        let bins = spec.bin_range(BAND_EDGES_HZ[i], BAND_EDGES_HZ[i + 1]);
        if bins.is_empty() {
            out.push(vec![0.0; frames]);
            continue;
        }
        let len = baseband_len(duration, BANK_RATE_HZ).max(bins.len());
        let y = spec.baseband(bins.start, &vec![1.0; bins.len()], len);
        let powers = frame_ranges(len, duration, period_s, frames)
            .into_iter()
            .map(|r| {
                if r.is_empty() {
                    0.0
                } else {
                    let n = r.len() as f64;
                    y[r].iter().map(|c| c.norm_sqr()).sum::<f64>() / (2.0 * n)
                }
            })
            .collect();
        out.push(powers);
    }
    out
}

/// Loudness per frame from band-major frame powers.
pub(crate) fn loudness_per_frame(frame_powers: &[Vec<f64>]) -> Vec<f64> {
    let frames = frame_powers.first().map_or(0, Vec::len);
    let mut buf = vec![0.0; GRID_LEN];
    (0..frames)
        .map(|j| {
            let p: [f64; BAND_COUNT] = std::array::from_fn(|i| frame_powers[i][j]);
            total_from_powers(&p, &mut buf)
        })
        .collect()
}
