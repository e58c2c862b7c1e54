//! Acoustic end-of-line fault detection for geared motors.
//!
//! The pipeline band-passes a microphone recording, extracts either
//! envelope-spectrum features at the gearbox fault frequencies or
//! psychoacoustic loudness/roughness/fluctuation statistics, and scores
//! the result with a Bagging-RandomMiner one-class classifier trained on
//! healthy motors only.
//!
//! Modules map onto the processing chain:
//!
//! - [`signal`]: the [`TimeSignal`] type, WAV I/O and the synthetic motor/dataset generator
//! - [`dsp`]: windowed FIR design, zero-phase filtering, analytic envelope, spectra
//! - [`envelope`]: normal, squared and logarithmic envelope spectra
//! - [`gearbox`]: shaft/mesh/sideband fault frequencies and expert features
//! - [`psycho`]: loudness, roughness and fluctuation strength
//! - [`occ`]: the Bagging-RandomMiner classifier
//! - [`eval`]: ROC/AUC, Kendall's W, label voting and the benchmark protocol
//! - [`pipeline`]: per-sample feature extraction for each feature set

pub mod config;
pub mod dsp;
pub mod envelope;
pub mod error;
pub mod eval;
pub mod exec;
pub mod feature;
pub mod gearbox;
pub mod occ;
pub mod pipeline;
pub mod psycho;
pub mod signal;

pub use error::{Error, Result};
pub use exec::Execution;
pub use feature::FeatureVector;
pub use signal::TimeSignal;
