//! Psychoacoustic metrics: loudness (sone), roughness (asper) and fluctuation
//! strength (vacil), stationary and time-varying, plus the statistics that
//! condense the series into the SPA and TVPA feature vectors.
//!
//! The models follow the Zwicker loudness and Daniel–Weber roughness
//! structures in simplified form and are pinned by their reference stimuli:
//! a 1 kHz tone at 40 dB SPL is 1 sone, a 60 dB 1 kHz tone fully amplitude
//! modulated at 70 Hz is 1 asper, and the same tone modulated at 4 Hz is
//! 1 vacil. Signals are expected in pascal.
//!
//! ```
//! use gearsound::{psycho, TimeSignal};
//!
//! let fs = 48000.0;
//! let amp = 20e-6 * 10f64.powf(40.0 / 20.0) * 2f64.sqrt();
//! let tone: Vec<f64> = (0..48000)
//!     .map(|i| amp * (2.0 * std::f64::consts::PI * 1000.0 * i as f64 / fs).sin())
//!     .collect();
//! let n = psycho::stationary_loudness(&TimeSignal::new(tone, fs).unwrap()).unwrap();
//! assert!((n.total_sone - 1.0).abs() < 0.1);
//! ```

mod bands;
mod bark;
mod fluctuation;
mod loudness;
mod roughness;
mod stats;

pub use bark::{bark_to_hz, hz_to_bark, threshold_in_quiet_db, BAND_EDGES_HZ};
pub use fluctuation::modulation_weight as fluctuation_weight;
pub use loudness::StationaryLoudness;
pub use roughness::{carrier_weight, modulation_weight as roughness_weight};
pub use stats::{impulse_factor, kurtosis, variance};

use std::f64::consts::{PI, SQRT_2};

use bands::SignalSpectrum;

use crate::dsp::{design_fir_window, extend_by_prediction, zero_phase, FilterKind};
use crate::error::{Error, Result};
use crate::feature::FeatureVector;
use crate::signal::{TimeSignal, REFERENCE_PRESSURE_PA};

/// Frame period of the loudness and fluctuation series.
pub const LOUDNESS_FRAME_S: f64 = 0.002;
/// Frame period of the roughness series.
pub const ROUGHNESS_FRAME_S: f64 = roughness::FRAME_PERIOD_S;
/// Cutoff of the high-pass applied to the loudness series.
pub const LOUDNESS_HIGHPASS_HZ: f64 = 10.0;

/// Longest extension added to each end of a signal before the 2 ms band
/// powers are taken. It keeps the step between the record's end and start,
/// which the circular transform would otherwise see, out of the kept frames.
const EDGE_PAD_S: f64 = 0.1;
/// Order and fit length of the linear predictor that builds the extension.
const EDGE_ORDER: usize = 32;
const EDGE_FIT_LEN: usize = 4096;

pub const MIN_STATIONARY_S: f64 = 0.5;
pub const MIN_LOUDNESS_S: f64 = 0.1;
pub const MIN_ROUGHNESS_S: f64 = 0.4;
pub const MIN_FLUCTUATION_S: f64 = 1.0;

pub const SPA_NAMES: [&str; 3] = ["spa_loudness", "spa_roughness", "spa_fluctuation"];
pub const TVPA_NAMES: [&str; 3] = [
    "tvpa_loudness_impulse_factor",
    "tvpa_roughness_variance",
    "tvpa_fluctuation_kurtosis",
];

macro_rules! series_type {
    ($(#[$doc:meta])* $name:ident, $period:expr) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name {
            pub values: Vec<f64>,
            pub start_time_s: f64,
        }

        impl $name {
            pub const FRAME_PERIOD_S: f64 = $period;

            pub fn new(values: Vec<f64>) -> Self {
                Self { values, start_time_s: 0.0 }
            }

            pub fn frame_period_s(&self) -> f64 {
                Self::FRAME_PERIOD_S
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                self.values.is_empty()
            }

            pub fn mean(&self) -> f64 {
                if self.values.is_empty() {
                    0.0
                } else {
                    self.values.iter().sum::<f64>() / self.values.len() as f64
                }
            }
        }
    };
}

series_type!(
    /// Loudness in sone per 2 ms frame.
    LoudnessSeries,
    LOUDNESS_FRAME_S
);
series_type!(
    /// Roughness in asper per non-overlapping 200 ms frame.
    RoughnessSeries,
    ROUGHNESS_FRAME_S
);
series_type!(
    /// Fluctuation strength in vacil per 2 ms frame.
    FluctuationSeries,
    LOUDNESS_FRAME_S
);

fn require_duration(signal: &TimeSignal, min_s: f64) -> Result<()> {
    let required = (min_s * signal.sample_rate_hz() - 1e-9).ceil() as usize;
    if signal.len() < required {
        return Err(Error::SignalTooShort {
            required,
            actual: signal.len(),
        });
    }
    Ok(())
}

/// `depth`-modulated tone whose unmodulated carrier has `level_db` SPL.
pub(crate) fn reference_am_tone(
    carrier_hz: f64,
    level_db: f64,
    modulation_hz: f64,
    depth: f64,
    duration_s: f64,
    rate_hz: f64,
) -> TimeSignal {
    let amp = REFERENCE_PRESSURE_PA * 10f64.powf(level_db / 20.0) * SQRT_2;
    let n = (duration_s * rate_hz).round() as usize;
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / rate_hz;
            amp * (1.0 + depth * (2.0 * PI * modulation_hz * t).cos()) * (2.0 * PI * carrier_hz * t).sin()
        })
        .collect();
    TimeSignal::new(samples, rate_hz).expect("reference stimulus is valid")
}

pub fn stationary_loudness(signal: &TimeSignal) -> Result<StationaryLoudness> {
    require_duration(signal, MIN_STATIONARY_S)?;
    let spec = SignalSpectrum::new(signal);
    Ok(loudness::loudness_from_powers(&loudness::band_powers(&spec)))
}

/// Band-major 2 ms frame powers of `signal`, computed on a copy extended by
/// faded linear prediction and cut back to the frames of the original record.
pub(crate) fn loudness_frame_powers(signal: &TimeSignal) -> Vec<Vec<f64>> {
    let (n, fs) = (signal.len(), signal.sample_rate_hz());
    let frames = bands::frame_count(signal.duration_s(), LOUDNESS_FRAME_S);
    let pad_frames = (EDGE_PAD_S.min((n - 1) as f64 / fs) / LOUDNESS_FRAME_S + 1e-9).floor() as usize;
    let pad = ((pad_frames as f64 * LOUDNESS_FRAME_S * fs - 1e-9).ceil() as usize).min(n - 1);
    let padded = TimeSignal::new(
        extend_by_prediction(signal.samples(), pad, EDGE_ORDER, EDGE_FIT_LEN),
        fs,
    )
    .expect("padding keeps the rate");
    loudness::band_frame_powers(&SignalSpectrum::new(&padded), LOUDNESS_FRAME_S)
        .into_iter()
        .map(|band| band[pad_frames..pad_frames + frames].to_vec())
        .collect()
}

/// One loudness value per whole 2 ms frame.
pub fn timevarying_loudness(signal: &TimeSignal) -> Result<LoudnessSeries> {
    require_duration(signal, MIN_LOUDNESS_S)?;
    let powers = loudness_frame_powers(signal);
    Ok(LoudnessSeries::new(loudness::loudness_per_frame(&powers)))
}

pub fn timevarying_roughness(signal: &TimeSignal) -> Result<RoughnessSeries> {
    require_duration(signal, MIN_ROUGHNESS_S)?;
    let spec = SignalSpectrum::new(signal);
    Ok(RoughnessSeries::new(roughness::series(&spec, signal.sample_rate_hz())))
}

pub fn timevarying_fluctuation(signal: &TimeSignal) -> Result<FluctuationSeries> {
    require_duration(signal, MIN_FLUCTUATION_S)?;
    let powers = loudness_frame_powers(signal);
    Ok(FluctuationSeries::new(fluctuation::series(&powers, LOUDNESS_FRAME_S)))
}

/// Zero-phase 10 Hz high-pass of a loudness series with its mean added back,
/// so that ratios to the mean stay defined.
pub fn highpass_loudness(series: &LoudnessSeries) -> Result<LoudnessSeries> {
    let rate = 1.0 / LoudnessSeries::FRAME_PERIOD_S;
    let kernel = design_fir_window(LOUDNESS_HIGHPASS_HZ, None, rate, FilterKind::HighPass)?;
    let mean = series.mean();
    let centred: Vec<f64> = series.values.iter().map(|v| v - mean).collect();
    let filtered = zero_phase(&centred, &kernel).map_err(|e| match e {
        Error::SignalTooShort { required, actual } => Error::SeriesTooShort { required, actual },
        other => other,
    })?;
    // edge residue leaves a little DC behind; the output mean is the input's
    let residue = filtered.iter().sum::<f64>() / filtered.len() as f64;
    Ok(LoudnessSeries {
        values: filtered.into_iter().map(|v| v - residue + mean).collect(),
        start_time_s: series.start_time_s,
    })
}

/// All psychoacoustic quantities of one signal.
#[derive(Debug, Clone)]
pub struct PsychoAnalysis {
    pub stationary: StationaryLoudness,
    pub loudness: LoudnessSeries,
    pub roughness: RoughnessSeries,
    pub fluctuation: FluctuationSeries,
}

impl PsychoAnalysis {
    pub fn compute(signal: &TimeSignal) -> Result<Self> {
        require_duration(signal, MIN_FLUCTUATION_S)?;
        let spec = SignalSpectrum::new(signal);
        let powers = loudness_frame_powers(signal);
        Ok(Self {
            stationary: loudness::loudness_from_powers(&loudness::band_powers(&spec)),
            loudness: LoudnessSeries::new(loudness::loudness_per_frame(&powers)),
            roughness: RoughnessSeries::new(roughness::series(&spec, signal.sample_rate_hz())),
            fluctuation: FluctuationSeries::new(fluctuation::series(&powers, LOUDNESS_FRAME_S)),
        })
    }

    /// Stationary loudness and the mean roughness and fluctuation.
    pub fn spa(&self) -> Result<FeatureVector> {
        FeatureVector::new(
            SPA_NAMES.iter().map(|s| s.to_string()).collect(),
            vec![
                self.stationary.total_sone,
                self.roughness.mean(),
                self.fluctuation.mean(),
            ],
        )
    }

    /// Impulse factor of the high-passed loudness, variance of roughness and
    /// kurtosis of fluctuation.
    pub fn tvpa(&self) -> Result<FeatureVector> {
        let hp = highpass_loudness(&self.loudness)?;
        FeatureVector::new(
            TVPA_NAMES.iter().map(|s| s.to_string()).collect(),
            vec![
                impulse_factor(&hp.values)?,
                variance(&self.roughness.values)?,
                kurtosis(&self.fluctuation.values)?,
            ],
        )
    }
}

pub fn spa_features(signal: &TimeSignal) -> Result<FeatureVector> {
    PsychoAnalysis::compute(signal)?.spa()
}

pub fn tvpa_features(signal: &TimeSignal) -> Result<FeatureVector> {
    PsychoAnalysis::compute(signal)?.tvpa()
}
