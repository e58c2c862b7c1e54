use super::fft::convolve;
use super::FilterKernel;
use crate::error::{Error, Result};
use crate::signal::TimeSignal;

/// Zero-phase filtering of a signal: the kernel is applied forward, then to
/// the time-reversed output, so the net response is the squared magnitude
/// of the kernel with no phase shift.
pub fn filter_zero_phase(signal: &TimeSignal, kernel: &FilterKernel) -> Result<TimeSignal> {
    let out = zero_phase(signal.samples(), kernel)?;
    signal.with_samples(out)
}

/// `x` mirrored about its end samples by `pad` on each side. Needs
/// `pad < x.len()`.
pub(crate) fn reflect_pad(x: &[f64], pad: usize) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n + 2 * pad);
    out.extend((1..=pad).rev().map(|k| x[k]));
    out.extend_from_slice(x);
    out.extend((1..=pad).map(|k| x[n - 1 - k]));
    out
}

/// Slice version of [`filter_zero_phase`]. Both ends are reflect-padded by one
/// kernel length before filtering and trimmed afterwards.
pub fn zero_phase(x: &[f64], kernel: &FilterKernel) -> Result<Vec<f64>> {
    let taps = kernel.taps();
    let pad = taps.len();
    let required = 3 * pad + 1;
    if x.len() < required {
        return Err(Error::SignalTooShort {
            required,
            actual: x.len(),
        });
    }
    let n = x.len();
    let padded = reflect_pad(x, pad);

    let mut y = convolve(&padded, taps);
    y.truncate(padded.len());
    y.reverse();
    let mut z = convolve(&y, taps);
    z.truncate(padded.len());
    z.reverse();
    Ok(z[pad..pad + n].to_vec())
}
