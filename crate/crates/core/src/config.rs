//! Pipeline configuration, read from a single TOML document.
//!
//! Every key is optional; omitted keys take the defaults below, so an empty
//! file reproduces the reference setup:
//!
//! ```toml
//! seed = 42
//! feature_set = "les+tvpa"
//!
//! [geometry]
//! rated_speed_rpm = 1375.0
//! teeth = [16, 40, 12, 48]
//!
//! [analysis]
//! lower_cutoff_hz = 1150.0
//! upper_cutoff_hz = 5100.0
//! min_fault_hz = 10.0
//! tolerance_rel = 0.01
//! k_max = 4
//!
//! [occ]
//! bag_count = 100
//! prototype_fraction = 0.1
//!
//! [dataset]
//! sample_rate_hz = 48000.0
//! duration_s = 5.0
//! # ... see `DatasetConfig`
//! ```
//!
//! The digest recorded in reports is the SHA-256 of the config file bytes.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gearbox::{GearGeometry, DEFAULT_K_MAX, DEFAULT_MIN_HZ, DEFAULT_TOLERANCE_REL};
use crate::occ::BrmParams;
use crate::pipeline::FeatureSet;
use crate::signal::DatasetConfig;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_LOWER_CUTOFF_HZ: f64 = 1150.0;
pub const DEFAULT_UPPER_CUTOFF_HZ: f64 = 5100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub lower_cutoff_hz: f64,
    pub upper_cutoff_hz: f64,
    pub min_fault_hz: f64,
    pub tolerance_rel: f64,
    pub k_max: u32,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            lower_cutoff_hz: DEFAULT_LOWER_CUTOFF_HZ,
            upper_cutoff_hz: DEFAULT_UPPER_CUTOFF_HZ,
            min_fault_hz: DEFAULT_MIN_HZ,
            tolerance_rel: DEFAULT_TOLERANCE_REL,
            k_max: DEFAULT_K_MAX,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        let (l, h) = (self.lower_cutoff_hz, self.upper_cutoff_hz);
        if !(l > 0.0 && h > l) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < lower_cutoff_hz < upper_cutoff_hz, got {l} and {h}"
            )));
        }
        if !(self.tolerance_rel > 0.0 && self.tolerance_rel < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance_rel must be in (0, 1), got {}",
                self.tolerance_rel
            )));
        }
        if !(self.min_fault_hz >= 0.0) || self.k_max == 0 {
            return Err(Error::InvalidConfig(
                "min_fault_hz must be non-negative and k_max positive".into(),
            ));
        }
        Ok(())
    }
}

/// Classifier settings; the seed comes from the pipeline seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OccConfig {
    pub bag_count: usize,
    pub prototype_fraction: f64,
}

impl Default for OccConfig {
    fn default() -> Self {
        let p = BrmParams::default();
        Self {
            bag_count: p.bag_count,
            prototype_fraction: p.prototype_fraction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub feature_set: FeatureSet,
    pub geometry: GearGeometry,
    pub analysis: AnalysisConfig,
    pub occ: OccConfig,
    pub dataset: DatasetConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            feature_set: FeatureSet::LesTvpa,
            geometry: GearGeometry::reference(),
            analysis: AnalysisConfig::default(),
            occ: OccConfig::default(),
            dataset: DatasetConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: PipelineConfig = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.analysis.validate()?;
        self.dataset.validate()?;
        self.brm_params().validate()
    }

    pub fn brm_params(&self) -> BrmParams {
        BrmParams {
            bag_count: self.occ.bag_count,
            prototype_fraction: self.occ.prototype_fraction,
            seed: self.seed,
        }
    }
}

/// A configuration together with the digest of the bytes it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub config: PipelineConfig,
    pub digest: String,
}

impl LoadedConfig {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(bytes).map_err(|_| Error::InvalidConfig("config is not valid UTF-8".into()))?;
        Ok(Self {
            config: PipelineConfig::from_toml(text)?,
            digest: sha256_hex(bytes),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

impl From<PipelineConfig> for LoadedConfig {
    /// Digest of the canonical serialization.
    fn from(config: PipelineConfig) -> Self {
        let digest = sha256_hex(config.to_toml().as_bytes());
        Self { config, digest }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_default() {
        assert_eq!(PipelineConfig::from_toml("").unwrap(), PipelineConfig::default());
    }

    #[test]
    fn defaults_carry_the_reference_constants() {
        let c = PipelineConfig::default();
        assert_eq!(c.analysis.lower_cutoff_hz, 1150.0);
        assert_eq!(c.analysis.upper_cutoff_hz, 5100.0);
        assert_eq!(c.analysis.min_fault_hz, 10.0);
        assert_eq!(c.analysis.tolerance_rel, 0.01);
        assert_eq!(c.analysis.k_max, 4);
        assert_eq!(c.occ.bag_count, 100);
    }

    #[test]
    fn round_trip_and_overrides() {
        let c = PipelineConfig::default();
        assert_eq!(PipelineConfig::from_toml(&c.to_toml()).unwrap(), c);
        let c = PipelineConfig::from_toml("seed = 7\nfeature_set = \"nes\"\n[occ]\nbag_count = 5\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.feature_set, FeatureSet::Nes);
        assert_eq!(c.occ.bag_count, 5);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(PipelineConfig::from_toml("sead = 1").is_err());
        assert!(PipelineConfig::from_toml("[analysis]\nlower_cutoff_hz = 6000.0").is_err());
        assert!(PipelineConfig::from_toml("[dataset]\nnoisy = -1").is_err());
    }

    #[test]
    fn digest_tracks_bytes() {
        let a = LoadedConfig::from_bytes(b"seed = 1\n").unwrap();
        let b = LoadedConfig::from_bytes(b"seed = 1 \n").unwrap();
        assert_eq!(a.config, b.config);
        assert_ne!(a.digest, b.digest);
        assert_eq!(a.digest.len(), 64);
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
