//! Gear kinematics, fault-frequency enumeration and expert features.
//!
//! Shafts are numbered from the motor (shaft 1) to the output. Stage `s`
//! meshes driving gear `z[2s-1]` on shaft `s` with driven gear `z[2s]` on
//! shaft `s+1`, so `f[s+1] = f[s] · z[2s-1] / z[2s]`.
//!
//! The fault-frequency set holds, in this order:
//! 1. shaft harmonics `k · f[n]`, `k = 1..=k_max`, by shaft then `k`
//! 2. mesh frequencies `f[s] · z[2s-1]`, by stage
//! 3. sidebands `mesh[s] ± f[n]` for the two shafts of stage `s` (`n = s, s+1`),
//!    by stage, then shaft, minus before plus
//!
//! Entries below the floor frequency are dropped one by one, so a slow
//! output shaft still contributes its mesh and sidebands.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::dsp::SpectrumBins;
use crate::error::{Error, Result};
use crate::feature::FeatureVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GearGeometry {
    pub rated_speed_rpm: f64,
    /// `z1..z2s`: driving then driven tooth count for each stage.
    pub teeth: Vec<u32>,
}

impl GearGeometry {
    pub fn new(rated_speed_rpm: f64, teeth: Vec<u32>) -> Result<Self> {
        let g = Self { rated_speed_rpm, teeth };
        g.validate()?;
        Ok(g)
    }

    /// Two-stage helical reference: 1375 rpm, teeth (16, 40, 12, 48), total ratio 10.
    pub fn reference() -> Self {
        Self {
            rated_speed_rpm: 1375.0,
            teeth: vec![16, 40, 12, 48],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rated_speed_rpm.is_finite() && self.rated_speed_rpm > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "rated speed must be positive, got {}",
                self.rated_speed_rpm
            )));
        }
        if self.teeth.is_empty() || !self.teeth.len().is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "need an even, non-zero number of tooth counts, got {}",
                self.teeth.len()
            )));
        }
        if let Some(z) = self.teeth.iter().find(|&&z| z < 4) {
            return Err(Error::InvalidConfig(format!("tooth count {z} is below 4")));
        }
        Ok(())
    }

    pub fn stage_count(&self) -> usize {
        self.teeth.len() / 2
    }

    /// Same gearbox at a different motor speed.
    pub fn at_speed(&self, rpm: f64) -> Self {
        Self {
            rated_speed_rpm: rpm,
            teeth: self.teeth.clone(),
        }
    }

    /// Overall reduction `f1 / f_out` as a reduced fraction `(num, den)`.
    pub fn total_ratio(&self) -> (u64, u64) {
        let (mut num, mut den) = (1u64, 1u64);
        for stage in self.teeth.chunks(2) {
            num *= stage[1] as u64;
            den *= stage[0] as u64;
            let g = num.gcd(&den);
            num /= g;
            den /= g;
        }
        (num, den)
    }
}

/// One frequency per shaft, motor shaft first (`stage_count + 1` entries).
pub fn shaft_frequencies(geometry: &GearGeometry) -> Vec<f64> {
    let mut f = vec![geometry.rated_speed_rpm / 60.0];
    for stage in geometry.teeth.chunks(2) {
        let prev = *f.last().unwrap();
        f.push(prev * stage[0] as f64 / stage[1] as f64);
    }
    f
}

pub fn mesh_frequencies(geometry: &GearGeometry) -> Vec<f64> {
    let f = shaft_frequencies(geometry);
    geometry
        .teeth
        .chunks(2)
        .enumerate()
        .map(|(s, stage)| f[s] * stage[0] as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultFrequency {
    pub label: String,
    pub frequency_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultFrequencySet {
    pub entries: Vec<FaultFrequency>,
    pub min_frequency_hz: f64,
}

impl FaultFrequencySet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.label.as_str()).collect()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.frequency_hz).collect()
    }

    pub fn max_frequency_hz(&self) -> f64 {
        self.entries.iter().map(|e| e.frequency_hz).fold(0.0, f64::max)
    }
}

pub const DEFAULT_K_MAX: u32 = 4;
pub const DEFAULT_MIN_HZ: f64 = 10.0;
pub const DEFAULT_TOLERANCE_REL: f64 = 0.01;

pub fn enumerate_fault_frequencies(geometry: &GearGeometry, k_max: u32, min_hz: f64) -> FaultFrequencySet {
    let shafts = shaft_frequencies(geometry);
    let meshes = mesh_frequencies(geometry);
    let mut entries = Vec::new();
    let mut push = |label: String, frequency_hz: f64| {
        if frequency_hz >= min_hz {
            entries.push(FaultFrequency { label, frequency_hz });
        }
    };
    for (n, f) in shafts.iter().enumerate() {
        for k in 1..=k_max {
            push(format!("shaft{}_k{}", n + 1, k), k as f64 * f);
        }
    }
    for (s, m) in meshes.iter().enumerate() {
        push(format!("mesh{}", s + 1), *m);
    }
    for (s, m) in meshes.iter().enumerate() {
        for n in [s, s + 1] {
            push(format!("mesh{}_shaft{}_lower", s + 1, n + 1), m - shafts[n]);
            push(format!("mesh{}_shaft{}_upper", s + 1, n + 1), m + shafts[n]);
        }
    }
    FaultFrequencySet {
        entries,
        min_frequency_hz: min_hz,
    }
}

/// Maximum spectrum magnitude within `[ff·(1-tol), ff·(1+tol)]` for each
/// fault frequency. A window that holds no bin falls back to the nearest bin.
/// Feature names are `<prefix>_<label>`.
pub fn extract_expert_features(
    spectrum: &SpectrumBins,
    ffs: &FaultFrequencySet,
    tolerance_rel: f64,
    prefix: &str,
) -> Result<FeatureVector> {
    let required = ffs.max_frequency_hz() * (1.0 + tolerance_rel);
    if spectrum.max_frequency_hz() < required {
        return Err(Error::SpectrumTooNarrow {
            required_hz: required,
            available_hz: spectrum.max_frequency_hz(),
        });
    }
    let res = spectrum.resolution_hz;
    let values = ffs
        .entries
        .iter()
        .map(|e| {
            let lo = e.frequency_hz * (1.0 - tolerance_rel);
            let hi = e.frequency_hz * (1.0 + tolerance_rel);
            let first = (lo / res).ceil().max(0.0) as usize;
            let last = ((hi / res).floor() as usize).min(spectrum.len() - 1);
            if first > last {
                spectrum.magnitudes[spectrum.nearest_bin(e.frequency_hz)]
            } else {
                spectrum.magnitudes[first..=last]
                    .iter()
                    .cloned()
                    .fold(f64::NEG_INFINITY, f64::max)
            }
        })
        .collect();
    let names = ffs.entries.iter().map(|e| format!("{prefix}_{}", e.label)).collect();
    FeatureVector::new(names, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn reference_shaft_speeds() {
        let f = shaft_frequencies(&GearGeometry::reference());
        assert_eq!(f.len(), 3);
        // 1375/60, then x16/40, then x12/48
        assert!(close(f[0], 22.916_666_666_666_668, 1e-12));
        assert!(close(f[1], 9.166_666_666_666_666, 1e-12));
        assert!(close(f[2], 2.291_666_666_666_666_6, 1e-12));
        assert_eq!(GearGeometry::reference().total_ratio(), (10, 1));
    }

    #[test]
    fn unity_stage() {
        let g = GearGeometry::new(1200.0, vec![20, 20]).unwrap();
        let f = shaft_frequencies(&g);
        assert_eq!(f[0], f[1]);
    }

    #[test]
    fn geometry_validation() {
        assert!(GearGeometry::new(1375.0, vec![16, 40, 12]).is_err());
        assert!(GearGeometry::new(1375.0, vec![3, 40]).is_err());
        assert!(GearGeometry::new(0.0, vec![16, 40]).is_err());
        assert!(GearGeometry::new(1375.0, vec![]).is_err());
    }

    #[test]
    fn reference_fault_frequency_set() {
        let set = enumerate_fault_frequencies(&GearGeometry::reference(), 4, 10.0);
        let f1 = 1375.0 / 60.0;
        let f2 = f1 * 16.0 / 40.0;
        let f3 = f2 * 12.0 / 48.0;
        let m1 = f1 * 16.0;
        let m2 = f2 * 12.0;
        let want = [
            ("shaft1_k1", f1),
            ("shaft1_k2", 2.0 * f1),
            ("shaft1_k3", 3.0 * f1),
            ("shaft1_k4", 4.0 * f1),
            ("shaft2_k2", 2.0 * f2),
            ("shaft2_k3", 3.0 * f2),
            ("shaft2_k4", 4.0 * f2),
            ("mesh1", m1),
            ("mesh2", m2),
            ("mesh1_shaft1_lower", m1 - f1),
            ("mesh1_shaft1_upper", m1 + f1),
            ("mesh1_shaft2_lower", m1 - f2),
            ("mesh1_shaft2_upper", m1 + f2),
            ("mesh2_shaft2_lower", m2 - f2),
            ("mesh2_shaft2_upper", m2 + f2),
            ("mesh2_shaft3_lower", m2 - f3),
            ("mesh2_shaft3_upper", m2 + f3),
        ];
        assert_eq!(set.len(), want.len());
        for (e, (label, f)) in set.entries.iter().zip(want) {
            assert_eq!(e.label, label);
            assert!(close(e.frequency_hz, f, 1e-9), "{label}");
        }
        assert!(close(m1, 366.666_666_666_666_7, 1e-9));
        assert!(close(m2, 110.0, 1e-9));
        let sidebands: Vec<f64> = set.entries[13..].iter().map(|e| e.frequency_hz).collect();
        for (got, want) in sidebands.iter().zip([100.833, 119.167, 107.708, 112.292]) {
            assert!(close(*got, want, 1e-3));
        }
    }

    #[test]
    fn floor_drops_individual_entries() {
        let set = enumerate_fault_frequencies(&GearGeometry::reference(), 4, 10.0);
        assert!(set.entries.iter().all(|e| e.frequency_hz >= 10.0));
        assert!(!set.labels().contains(&"shaft2_k1"));
        assert!(!set.labels().iter().any(|l| l.starts_with("shaft3_")));
        let all = enumerate_fault_frequencies(&GearGeometry::reference(), 4, 0.0);
        assert_eq!(all.len(), 12 + 2 + 8);
    }

    fn spectrum_with_peak(peak_hz: f64, peak: f64) -> SpectrumBins {
        let res = 0.1;
        let n = 1001;
        let mut mags = vec![0.01; n];
        mags[(peak_hz / res).round() as usize] = peak;
        SpectrumBins {
            frequencies_hz: (0..n).map(|k| k as f64 * res).collect(),
            magnitudes: mags,
            resolution_hz: res,
        }
    }

    fn single(freq: f64) -> FaultFrequencySet {
        FaultFrequencySet {
            entries: vec![FaultFrequency {
                label: "ff".into(),
                frequency_hz: freq,
            }],
            min_frequency_hz: 10.0,
        }
    }

    #[test]
    fn window_captures_and_excludes() {
        let inside = spectrum_with_peak(30.1, 0.9);
        let fv = extract_expert_features(&inside, &single(30.0), 0.01, "les").unwrap();
        assert_eq!(fv.values(), &[0.9]);
        assert_eq!(fv.names(), &["les_ff"]);
        let outside = spectrum_with_peak(30.5, 0.9);
        let fv = extract_expert_features(&outside, &single(30.0), 0.01, "les").unwrap();
        assert_eq!(fv.values(), &[0.01]);
    }

    #[test]
    fn jitter_window_rule() {
        // 0.5 % off stays in, 2 % off falls out
        let ff = 40.0;
        let near = spectrum_with_peak(ff * 1.005, 1.0);
        let far = spectrum_with_peak(ff * 1.02, 1.0);
        assert_eq!(
            extract_expert_features(&near, &single(ff), 0.01, "x").unwrap().values(),
            &[1.0]
        );
        assert_eq!(
            extract_expert_features(&far, &single(ff), 0.01, "x").unwrap().values(),
            &[0.01]
        );
    }

    #[test]
    fn narrow_window_uses_nearest_bin() {
        let s = spectrum_with_peak(20.0, 0.5);
        // window [19.998, 20.002] holds bin 200 exactly
        let fv = extract_expert_features(&s, &single(20.0), 1e-4, "x").unwrap();
        assert_eq!(fv.values(), &[0.5]);
        // [20.03, 20.05] holds no bin; 20.04 rounds to the 20.0 bin
        let fv = extract_expert_features(&s, &single(20.04), 5e-4, "x").unwrap();
        assert_eq!(fv.values(), &[0.5]);
        let fv = extract_expert_features(&s, &single(20.08), 1e-4, "x").unwrap();
        assert_eq!(fv.values(), &[0.01]);
    }

    #[test]
    fn order_and_length_follow_the_set() {
        let set = enumerate_fault_frequencies(&GearGeometry::reference(), 4, 10.0);
        let s = SpectrumBins {
            frequencies_hz: (0..5000).map(|k| k as f64 * 0.1).collect(),
            magnitudes: (0..5000).map(|k| k as f64).collect(),
            resolution_hz: 0.1,
        };
        let fv = extract_expert_features(&s, &set, 0.01, "nes").unwrap();
        assert_eq!(fv.len(), set.len());
        for (name, label) in fv.names().iter().zip(set.labels()) {
            assert_eq!(name, &format!("nes_{label}"));
        }
    }

    #[test]
    fn too_narrow_spectrum() {
        let s = spectrum_with_peak(30.0, 1.0);
        assert!(matches!(
            extract_expert_features(&s, &single(99.5), 0.01, "x"),
            Err(Error::SpectrumTooNarrow { .. })
        ));
    }

    proptest! {
        #[test]
        fn wider_tolerance_never_decreases(
            mags in proptest::collection::vec(0.0f64..1.0, 2000),
            ff in 10.0f64..150.0,
            tol in 0.001f64..0.05,
            extra in 0.0f64..0.05,
        ) {
            let s = SpectrumBins {
                frequencies_hz: (0..2000).map(|k| k as f64 * 0.1).collect(),
                magnitudes: mags,
                resolution_hz: 0.1,
            };
            let a = extract_expert_features(&s, &single(ff), tol, "x").unwrap().values()[0];
            let b = extract_expert_features(&s, &single(ff), tol + extra, "x").unwrap().values()[0];
            prop_assert!(b >= a);
        }

        #[test]
        fn ratio_matches_shaft_speeds(
            teeth in proptest::collection::vec(4u32..80, 1..4usize).prop_flat_map(|v| {
                let n = v.len();
                (Just(v), proptest::collection::vec(4u32..80, n))
            }),
            rpm in 100.0f64..4000.0,
        ) {
            let (drive, driven) = teeth;
            let t: Vec<u32> = drive.iter().zip(&driven).flat_map(|(a, b)| [*a, *b]).collect();
            let g = GearGeometry::new(rpm, t).unwrap();
            let f = shaft_frequencies(&g);
            let (num, den) = g.total_ratio();
            let via_ratio = f[0] * den as f64 / num as f64;
            prop_assert!((via_ratio - f[g.stage_count()]).abs() <= 1e-9 * f[0]);
        }
    }
}
