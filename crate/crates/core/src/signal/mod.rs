//! Acoustic pressure signals: representation, WAV I/O and synthetic generation.

mod dataset;
mod synth;
mod wav;

pub use dataset::{
    generate_dataset, read_manifest, write_manifest, DatasetConfig, DatasetSample, Manifest, Split, MANIFEST_HEADER,
};
pub use synth::{synthesize_motor_sound, NoiseKind, NoiseSpec, SyntheticMotorSpec};
pub use wav::{load_wav, load_wav_calibrated, save_wav, save_wav_as, WavEncoding};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sound pressure reference for dB SPL, in pascal.
pub const REFERENCE_PRESSURE_PA: f64 = 20e-6;

/// A sampled pressure signal. Samples are in pascal; `calibration_pa_per_fullscale`
/// records which pressure the digital full scale 1.0 stands for.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSignal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
    calibration_pa_per_fullscale: f64,
}

impl TimeSignal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        Self::with_calibration(samples, sample_rate_hz, 1.0)
    }

    pub fn with_calibration(samples: Vec<f64>, sample_rate_hz: f64, calibration_pa_per_fullscale: f64) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidSignal(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if !(calibration_pa_per_fullscale.is_finite() && calibration_pa_per_fullscale > 0.0) {
            return Err(Error::InvalidSignal(format!(
                "calibration must be positive, got {calibration_pa_per_fullscale}"
            )));
        }
        if samples.is_empty() {
            return Err(Error::InvalidSignal("signal has no samples".into()));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidSignal(format!("sample {i} is not finite")));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            calibration_pa_per_fullscale,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn calibration_pa_per_fullscale(&self) -> f64 {
        self.calibration_pa_per_fullscale
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    pub fn rms(&self) -> f64 {
        rms(&self.samples)
    }

    /// Same rate and calibration, new samples.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        Self::with_calibration(samples, self.sample_rate_hz, self.calibration_pa_per_fullscale)
    }

    pub fn scaled(&self, gain: f64) -> Result<Self> {
        self.with_samples(self.samples.iter().map(|s| s * gain).collect())
    }
}

pub(crate) fn rms(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// Health label of a motor, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Health {
    Healthy,
    MinorFault,
    MajorFault,
}

impl Health {
    pub const ALL: [Health; 3] = [Health::Healthy, Health::MinorFault, Health::MajorFault];

    pub fn as_str(self) -> &'static str {
        match self {
            Health::Healthy => "healthy",
            Health::MinorFault => "minor_fault",
            Health::MajorFault => "major_fault",
        }
    }

    pub fn severity(self) -> u8 {
        self as u8
    }
}

impl std::str::FromStr for Health {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "healthy" => Ok(Health::Healthy),
            "minor_fault" | "minor" => Ok(Health::MinorFault),
            "major_fault" | "major" => Ok(Health::MajorFault),
            other => Err(Error::Format(format!("unknown label {other:?}"))),
        }
    }
}

impl std::fmt::Display for Health {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
