//! Per-sample feature extraction for the six compared feature sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::AnalysisConfig;
use crate::dsp::{analytic_envelope, filter_zero_phase};
use crate::envelope::{band_pass_kernel, spectrum_from_envelope, EnvelopeKind};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::feature::FeatureVector;
use crate::gearbox::{enumerate_fault_frequencies, extract_expert_features, FaultFrequencySet, GearGeometry};
use crate::psycho::PsychoAnalysis;
use crate::signal::{DatasetSample, Manifest, TimeSignal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureSet {
    #[serde(rename = "nes")]
    Nes,
    #[serde(rename = "ses")]
    Ses,
    #[serde(rename = "les")]
    Les,
    #[serde(rename = "spa")]
    Spa,
    #[serde(rename = "tvpa")]
    Tvpa,
    /// LES expert features followed by TVPA.
    #[serde(rename = "les+tvpa")]
    LesTvpa,
}

impl FeatureSet {
    pub const ALL: [FeatureSet; 6] = [
        FeatureSet::Nes,
        FeatureSet::Ses,
        FeatureSet::Les,
        FeatureSet::Spa,
        FeatureSet::Tvpa,
        FeatureSet::LesTvpa,
    ];

    /// Display name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            FeatureSet::Nes => "NES",
            FeatureSet::Ses => "SES",
            FeatureSet::Les => "LES",
            FeatureSet::Spa => "SPA",
            FeatureSet::Tvpa => "TVPA",
            FeatureSet::LesTvpa => "LES+TVPA",
        }
    }

    /// Lower-case key used on the command line and in config files.
    pub fn key(self) -> &'static str {
        match self {
            FeatureSet::Nes => "nes",
            FeatureSet::Ses => "ses",
            FeatureSet::Les => "les",
            FeatureSet::Spa => "spa",
            FeatureSet::Tvpa => "tvpa",
            FeatureSet::LesTvpa => "les+tvpa",
        }
    }

    fn needs_envelope(self) -> bool {
        matches!(
            self,
            FeatureSet::Nes | FeatureSet::Ses | FeatureSet::Les | FeatureSet::LesTvpa
        )
    }

    fn needs_psycho(self) -> bool {
        matches!(self, FeatureSet::Spa | FeatureSet::Tvpa | FeatureSet::LesTvpa)
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for FeatureSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        FeatureSet::ALL
            .into_iter()
            .find(|f| f.key() == lower)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown feature set {s:?}")))
    }
}

/// Features of one sample for every set that was requested.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureBundle {
    pub nes: Option<FeatureVector>,
    pub ses: Option<FeatureVector>,
    pub les: Option<FeatureVector>,
    pub spa: Option<FeatureVector>,
    pub tvpa: Option<FeatureVector>,
}

impl FeatureBundle {
    pub fn get(&self, set: FeatureSet) -> Option<FeatureVector> {
        match set {
            FeatureSet::Nes => self.nes.clone(),
            FeatureSet::Ses => self.ses.clone(),
            FeatureSet::Les => self.les.clone(),
            FeatureSet::Spa => self.spa.clone(),
            FeatureSet::Tvpa => self.tvpa.clone(),
            FeatureSet::LesTvpa => {
                let (les, tvpa) = (self.les.as_ref()?, self.tvpa.as_ref()?);
                Some(les.concat(tvpa).expect("prefixes keep names disjoint"))
            }
        }
    }
}

/// Feature extraction for a fixed gearbox and analysis setup.
#[derive(Debug, Clone)]
pub struct FeatureExtractor {
    analysis: AnalysisConfig,
    fault_frequencies: FaultFrequencySet,
}

impl FeatureExtractor {
    pub fn new(geometry: &GearGeometry, analysis: &AnalysisConfig) -> Result<Self> {
        geometry.validate()?;
        analysis.validate()?;
        Ok(Self {
            analysis: analysis.clone(),
            fault_frequencies: enumerate_fault_frequencies(geometry, analysis.k_max, analysis.min_fault_hz),
        })
    }

    pub fn fault_frequencies(&self) -> &FaultFrequencySet {
        &self.fault_frequencies
    }

    /// Computes the features needed by `sets`. Both the envelope spectra and
    /// the psychoacoustic series are taken from one band-passed copy of the
    /// signal.
    pub fn extract_sets(&self, signal: &TimeSignal, sets: &[FeatureSet]) -> Result<FeatureBundle> {
        let a = &self.analysis;
        let kernel = band_pass_kernel(a.lower_cutoff_hz, a.upper_cutoff_hz, signal.sample_rate_hz())?;
        let filtered = filter_zero_phase(signal, &kernel)?;
        let mut bundle = FeatureBundle::default();
        if sets.iter().any(|s| s.needs_envelope()) {
            let env = analytic_envelope(filtered.samples());
            for kind in EnvelopeKind::ALL {
                let spectrum = spectrum_from_envelope(&env, filtered.sample_rate_hz(), kind)?;
                let fv = extract_expert_features(
                    &spectrum,
                    &self.fault_frequencies,
                    a.tolerance_rel,
                    &kind.name().to_ascii_lowercase(),
                )?;
                match kind {
                    EnvelopeKind::Nes => bundle.nes = Some(fv),
                    EnvelopeKind::Ses => bundle.ses = Some(fv),
                    EnvelopeKind::Les => bundle.les = Some(fv),
                }
            }
        }
        if sets.iter().any(|s| s.needs_psycho()) {
            let psycho = PsychoAnalysis::compute(&filtered)?;
            bundle.spa = Some(psycho.spa()?);
            bundle.tvpa = Some(psycho.tvpa()?);
        }
        Ok(bundle)
    }

    pub fn extract(&self, signal: &TimeSignal, set: FeatureSet) -> Result<FeatureVector> {
        let bundle = self.extract_sets(signal, &[set])?;
        Ok(bundle.get(set).expect("requested set was computed"))
    }

    /// Loads and analyses every manifest sample. Results are in manifest order.
    pub fn extract_manifest(
        &self,
        manifest: &Manifest,
        calibration_pa_per_fullscale: f64,
        sets: &[FeatureSet],
        exec: Execution,
    ) -> Result<Vec<FeatureBundle>> {
        exec.try_map(&manifest.samples, |sample: &DatasetSample| {
            let signal = manifest.load_signal(sample, calibration_pa_per_fullscale)?;
            self.extract_sets(&signal, sets)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feature_set_keys_round_trip() {
        for s in FeatureSet::ALL {
            assert_eq!(s.key().parse::<FeatureSet>().unwrap(), s);
            assert_eq!(s.name().parse::<FeatureSet>().unwrap(), s);
        }
        assert!("les-tvpa".parse::<FeatureSet>().is_err());
    }

    #[test]
    fn combined_set_puts_les_first() {
        let les = FeatureVector::new(vec!["les_a".into()], vec![1.0]).unwrap();
        let tvpa = FeatureVector::new(vec!["tvpa_b".into()], vec![2.0]).unwrap();
        let b = FeatureBundle {
            les: Some(les),
            tvpa: Some(tvpa),
            ..Default::default()
        };
        let c = b.get(FeatureSet::LesTvpa).unwrap();
        assert_eq!(c.names(), ["les_a", "tvpa_b"]);
        assert!(b.get(FeatureSet::Nes).is_none());
    }
}
