//! Numerical kernels shared by the envelope and psychoacoustic stages.

pub(crate) mod fft;
mod filter;
mod fir;
mod hilbert;
mod predict;
mod spectrum;

pub(crate) use filter::reflect_pad;
pub use filter::{filter_zero_phase, zero_phase};
pub use fir::{design_fir_window, tap_count, FilterKernel, FilterKind};
pub use hilbert::{analytic_envelope, analytic_signal};
pub use predict::{burg, extend_by_prediction};
pub use spectrum::{magnitude_spectrum, SpectrumBins};
