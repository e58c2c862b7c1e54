//! Critical-band scale helpers shared by the loudness, roughness and
//! fluctuation models.

/// Upper edges of the 24 critical bands, in Hz, preceded by 0. Band `i`
/// spans Bark `[i, i+1)`; between edges the scale is linear in frequency.
pub const BAND_EDGES_HZ: [f64; 25] = [
    0.0, 100.0, 200.0, 300.0, 400.0, 510.0, 630.0, 770.0, 920.0, 1080.0, 1270.0, 1480.0, 1720.0, 2000.0, 2320.0,
    2700.0, 3150.0, 3700.0, 4400.0, 5300.0, 6400.0, 7700.0, 9500.0, 12000.0, 15500.0,
];

pub const BAND_COUNT: usize = 24;

/// Specific-loudness grid resolution, in Bark.
pub const GRID_STEP_BARK: f64 = 0.1;
pub const GRID_LEN: usize = 240;

pub fn hz_to_bark(f: f64) -> f64 {
    let f = f.max(0.0);
    let last = BAND_EDGES_HZ[BAND_COUNT];
    if f >= last {
        let width = last - BAND_EDGES_HZ[BAND_COUNT - 1];
        return BAND_COUNT as f64 + (f - last) / width;
    }
    let i = BAND_EDGES_HZ.partition_point(|&e| e <= f) - 1;
    let (lo, hi) = (BAND_EDGES_HZ[i], BAND_EDGES_HZ[i + 1]);
    i as f64 + (f - lo) / (hi - lo)
}

pub fn bark_to_hz(z: f64) -> f64 {
    let z = z.max(0.0);
    if z >= BAND_COUNT as f64 {
        let last = BAND_EDGES_HZ[BAND_COUNT];
        return last + (z - BAND_COUNT as f64) * (last - BAND_EDGES_HZ[BAND_COUNT - 1]);
    }
    let i = z.floor() as usize;
    let (lo, hi) = (BAND_EDGES_HZ[i], BAND_EDGES_HZ[i + 1]);
    lo + (z - i as f64) * (hi - lo)
}

/// Representative frequency of loudness band `i` (geometric mean of its edges,
/// with the lowest edge held at 50 Hz).
pub fn band_centre_hz(i: usize) -> f64 {
    (BAND_EDGES_HZ[i].max(50.0) * BAND_EDGES_HZ[i + 1]).sqrt()
}

/// Terhardt's approximation of the threshold in quiet, dB SPL.
pub fn threshold_in_quiet_db(f: f64) -> f64 {
    let k = f.max(20.0) / 1000.0;
    3.64 * k.powf(-0.8) - 6.5 * (-0.6 * (k - 3.3).powi(2)).exp() + 1e-3 * k.powi(4)
}

/// Bark value at the centre of grid cell `j`.
pub fn grid_bark(j: usize) -> f64 {
    (j as f64 + 0.5) * GRID_STEP_BARK
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_map_to_integers() {
        for (i, &e) in BAND_EDGES_HZ.iter().enumerate() {
            assert!((hz_to_bark(e) - i as f64).abs() < 1e-12);
            assert!((bark_to_hz(i as f64) - e).abs() < 1e-9);
        }
    }

    #[test]
    fn round_trip() {
        for f in [5.0, 73.0, 999.0, 1000.0, 4321.0, 15000.0, 18000.0] {
            assert!((bark_to_hz(hz_to_bark(f)) - f).abs() < 1e-9);
        }
    }

    #[test]
    fn threshold_has_its_dip_near_3_khz() {
        assert!(threshold_in_quiet_db(3300.0) < 0.0);
        assert!(threshold_in_quiet_db(100.0) > 20.0);
        assert!((threshold_in_quiet_db(1000.0) - 3.37).abs() < 0.05);
    }
}
