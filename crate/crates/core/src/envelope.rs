//! Normal, squared and logarithmic envelope spectra of a band-passed signal.
//!
//! All three start from the analytic envelope `e[n]` of the band-passed signal:
//!
//! - NES: `|F{e}|`
//! - SES: `|F{e²}|²`
//! - LES: `|F{log(e² + ε)}|²`, with `ε = 1e-12 · max(e²)`
//!
//! The transformed sequence is mean-removed before the Fourier step, so the
//! DC bin is close to zero. The log form turns a gain into an additive
//! constant, which the mean removal cancels; that makes LES gain invariant.

use serde::{Deserialize, Serialize};

use crate::dsp::{
    analytic_envelope, design_fir_window, magnitude_spectrum, zero_phase, FilterKernel, FilterKind, SpectrumBins,
};
use crate::error::{Error, Result};
use crate::signal::TimeSignal;

/// Relative floor inside the logarithm of the LES.
pub const LOG_FLOOR_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    Nes,
    Ses,
    Les,
}

impl EnvelopeKind {
    pub const ALL: [EnvelopeKind; 3] = [EnvelopeKind::Nes, EnvelopeKind::Ses, EnvelopeKind::Les];

    pub fn name(self) -> &'static str {
        match self {
            EnvelopeKind::Nes => "NES",
            EnvelopeKind::Ses => "SES",
            EnvelopeKind::Les => "LES",
        }
    }
}

/// Band-pass kernel for `[lower, upper]` at the signal's rate.
pub fn band_pass_kernel(lower_hz: f64, upper_hz: f64, rate_hz: f64) -> Result<FilterKernel> {
    design_fir_window(lower_hz, Some(upper_hz), rate_hz, FilterKind::BandPass)
}

/// Zero-phase band-pass followed by the analytic envelope.
pub fn band_envelope(signal: &TimeSignal, lower_hz: f64, upper_hz: f64) -> Result<Vec<f64>> {
    let kernel = band_pass_kernel(lower_hz, upper_hz, signal.sample_rate_hz())?;
    let filtered = zero_phase(signal.samples(), &kernel)?;
    Ok(analytic_envelope(&filtered))
}

/// The sequence that gets Fourier transformed for `kind`, before mean removal.
pub fn transformed_envelope(envelope: &[f64], kind: EnvelopeKind) -> Vec<f64> {
    match kind {
        EnvelopeKind::Nes => envelope.to_vec(),
        EnvelopeKind::Ses => envelope.iter().map(|e| e * e).collect(),
        EnvelopeKind::Les => {
            let peak = envelope.iter().map(|e| e * e).fold(0.0, f64::max);
            if peak == 0.0 {
                return vec![0.0; envelope.len()];
            }
            let eps = LOG_FLOOR_REL * peak;
            envelope.iter().map(|e| (e * e + eps).ln()).collect()
        }
    }
}

fn remove_mean(mut x: Vec<f64>) -> Vec<f64> {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
    x
}

/// Envelope spectrum of an already computed analytic envelope.
pub fn spectrum_from_envelope(envelope: &[f64], rate_hz: f64, kind: EnvelopeKind) -> Result<SpectrumBins> {
    if envelope.len() < 2 {
        return Err(Error::SignalTooShort {
            required: 2,
            actual: envelope.len(),
        });
    }
    let seq = remove_mean(transformed_envelope(envelope, kind));
    let spec = magnitude_spectrum(&seq, rate_hz);
    Ok(match kind {
        EnvelopeKind::Nes => spec,
        EnvelopeKind::Ses | EnvelopeKind::Les => spec.map(|m| m * m),
    })
}

/// Envelope spectrum of `signal` band-passed to `[lower_hz, upper_hz]`.
pub fn envelope_spectrum(
    signal: &TimeSignal,
    kind: EnvelopeKind,
    lower_hz: f64,
    upper_hz: f64,
) -> Result<SpectrumBins> {
    let env = band_envelope(signal, lower_hz, upper_hz)?;
    spectrum_from_envelope(&env, signal.sample_rate_hz(), kind)
}

/// All three spectra from one band-pass and envelope pass, in [`EnvelopeKind::ALL`] order.
pub fn envelope_spectra(signal: &TimeSignal, lower_hz: f64, upper_hz: f64) -> Result<[SpectrumBins; 3]> {
    let env = band_envelope(signal, lower_hz, upper_hz)?;
    let rate = signal.sample_rate_hz();
    Ok([
        spectrum_from_envelope(&env, rate, EnvelopeKind::Nes)?,
        spectrum_from_envelope(&env, rate, EnvelopeKind::Ses)?,
        spectrum_from_envelope(&env, rate, EnvelopeKind::Les)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const FS: f64 = 48000.0;

    fn am_tone() -> TimeSignal {
        let x = (0..48000)
            .map(|i| {
                let t = i as f64 / FS;
                (1.0 + 0.5 * (2.0 * PI * 30.0 * t).cos()) * (2.0 * PI * 2000.0 * t).cos()
            })
            .collect();
        TimeSignal::new(x, FS).unwrap()
    }

    fn dominant_non_dc(s: &SpectrumBins) -> f64 {
        let k = (1..s.len())
            .max_by(|&a, &b| s.magnitudes[a].total_cmp(&s.magnitudes[b]))
            .unwrap();
        s.frequencies_hz[k]
    }

    #[test]
    fn every_kind_peaks_at_modulation_rate() {
        let x = am_tone();
        for kind in EnvelopeKind::ALL {
            let s = envelope_spectrum(&x, kind, 1150.0, 5100.0).unwrap();
            assert!((dominant_non_dc(&s) - 30.0).abs() <= s.resolution_hz, "{kind:?}");
            assert!(s.magnitudes[0] < 1e-9 * s.magnitudes[30]);
        }
    }

    #[test]
    fn squared_envelope_components_are_eight_to_one() {
        let x = am_tone();
        let env = band_envelope(&x, 1150.0, 5100.0).unwrap();
        let sq = remove_mean(transformed_envelope(&env, EnvelopeKind::Ses));
        let s = magnitude_spectrum(&sq, FS);
        let ratio = s.magnitudes[30] / s.magnitudes[60];
        assert!((ratio / 8.0 - 1.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn les_of_pure_tone_is_flat() {
        let x: Vec<f64> = (0..48000).map(|i| (2.0 * PI * 2000.0 * i as f64 / FS).cos()).collect();
        let s = envelope_spectrum(&TimeSignal::new(x, FS).unwrap(), EnvelopeKind::Les, 1150.0, 5100.0).unwrap();
        let worst = s.magnitudes[1..].iter().cloned().fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn zero_signal_gives_zero_spectra() {
        let x = TimeSignal::new(vec![0.0; 4000], FS).unwrap();
        for s in envelope_spectra(&x, 1150.0, 5100.0).unwrap() {
            assert!(s.magnitudes.iter().all(|&m| m == 0.0));
        }
    }

    #[test]
    fn short_signal_and_bad_band() {
        let x = TimeSignal::new(vec![0.0; 900], FS).unwrap();
        assert!(matches!(
            envelope_spectrum(&x, EnvelopeKind::Nes, 1150.0, 5100.0),
            Err(Error::SignalTooShort { .. })
        ));
        let x = TimeSignal::new(vec![0.0; 4000], FS).unwrap();
        assert!(matches!(
            envelope_spectrum(&x, EnvelopeKind::Nes, 5100.0, 1150.0),
            Err(Error::InvalidCutoffs(_))
        ));
    }
}
