//! Bagging-RandomMiner one-class classifier.
//!
//! Features are z-scored with the training statistics. Each of `T` miners
//! draws a bootstrap sample of the training rows, keeps a random subset of
//! `max(1, ⌈p·n⌉)` bootstrap members as prototypes, and sets its scale `δ` to
//! the mean distance from the bootstrap members to their nearest prototype.
//! The similarity of `x` is the mean over miners of `exp(−d²/(2δ²))`, `d`
//! being the Euclidean distance to the miner's nearest prototype.
//!
//! Miner `t` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `t`, so
//! miners can be fitted in any order or in parallel with identical results.

use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::feature::FeatureVector;

pub const MODEL_FORMAT_VERSION: u32 = 1;
pub const STD_FLOOR: f64 = 1e-12;
pub const DELTA_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BrmParams {
    pub bag_count: usize,
    pub prototype_fraction: f64,
    pub seed: u64,
}

impl Default for BrmParams {
    fn default() -> Self {
        Self {
            bag_count: 100,
            prototype_fraction: 0.1,
            seed: 0,
        }
    }
}

impl BrmParams {
    pub fn validate(&self) -> Result<()> {
        if self.bag_count == 0 {
            return Err(Error::InvalidConfig("bag_count must be at least 1".into()));
        }
        if !(self.prototype_fraction > 0.0 && self.prototype_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "prototype_fraction must be in (0, 1], got {}",
                self.prototype_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Per-column mean and population standard deviation, floored at [`STD_FLOOR`].
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let n = rows.len() as f64;
        let dim = rows.first().map_or(0, Vec::len);
        let mean: Vec<f64> = (0..dim).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
        let std = (0..dim)
            .map(|j| {
                let var = rows.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / n;
                var.sqrt().max(STD_FLOOR)
            })
            .collect();
        Self { mean, std }
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Miner {
    /// Training-row indices of the bootstrap draw.
    pub bootstrap: Vec<usize>,
    /// Training-row indices of the prototypes.
    pub prototype_rows: Vec<usize>,
    /// Prototypes in standardized coordinates.
    pub prototypes: Vec<Vec<f64>>,
    pub delta: f64,
}

impl Miner {
    pub fn nearest_distance(&self, z: &[f64]) -> f64 {
        self.prototypes
            .iter()
            .map(|p| euclidean(p, z))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    /// Similar enough to the training class.
    Accept,
    /// Suspected fault.
    Reject,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccModel {
    pub format_version: u32,
    pub feature_names: Vec<String>,
    pub params: BrmParams,
    pub standardizer: Standardizer,
    pub miners: Vec<Miner>,
}

fn fit_miner(rows: &[Vec<f64>], params: &BrmParams, t: usize) -> Miner {
    let n = rows.len();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(t as u64);
    let bootstrap: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let k = ((params.prototype_fraction * n as f64).ceil() as usize).clamp(1, n);
    let prototype_rows: Vec<usize> = index::sample(&mut rng, n, k)
        .into_iter()
        .map(|pos| bootstrap[pos])
        .collect();
    let prototypes: Vec<Vec<f64>> = prototype_rows.iter().map(|&r| rows[r].clone()).collect();
    let mut miner = Miner {
        bootstrap,
        prototype_rows,
        prototypes,
        delta: 0.0,
    };
    let total: f64 = miner.bootstrap.iter().map(|&r| miner.nearest_distance(&rows[r])).sum();
    miner.delta = (total / n as f64).max(DELTA_FLOOR);
    miner
}

/// Fits the ensemble on healthy-only training vectors.
pub fn fit_brm(train: &[FeatureVector], params: &BrmParams, exec: Execution) -> Result<OccModel> {
    params.validate()?;
    let first = train.first().ok_or(Error::EmptyTrainingSet)?;
    let dim = first.len();
    if let Some(bad) = train.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: bad.len(),
        });
    }
    let raw: Vec<Vec<f64>> = train.iter().map(|v| v.values().to_vec()).collect();
    let standardizer = Standardizer::fit(&raw);
    let rows: Vec<Vec<f64>> = raw.iter().map(|r| standardizer.transform(r)).collect();
    let miners = exec.map_range(params.bag_count, |t| fit_miner(&rows, params, t));
    Ok(OccModel {
        format_version: MODEL_FORMAT_VERSION,
        feature_names: first.names().to_vec(),
        params: *params,
        standardizer,
        miners,
    })
}

impl OccModel {
    pub fn dimension(&self) -> usize {
        self.feature_names.len()
    }

    fn check(&self, x: &FeatureVector) -> Result<Vec<f64>> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: x.len(),
            });
        }
        Ok(self.standardizer.transform(x.values()))
    }

    /// Natural log of the similarity, computed without underflow.
    pub fn log_score(&self, x: &FeatureVector) -> Result<f64> {
        let z = self.check(x)?;
        let exponents: Vec<f64> = self
            .miners
            .iter()
            .map(|m| {
                let d = m.nearest_distance(&z);
                -(d * d) / (2.0 * m.delta * m.delta)
            })
            .collect();
        let peak = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = exponents.iter().map(|e| (e - peak).exp()).sum();
        Ok((peak + sum.ln() - (self.miners.len() as f64).ln()).min(0.0))
    }

    /// Similarity to the training class, in `(0, 1]`.
    pub fn score(&self, x: &FeatureVector) -> Result<f64> {
        Ok(self.log_score(x)?.exp().max(f64::MIN_POSITIVE))
    }

    /// `−ln(similarity)`: zero on a prototype, growing with dissimilarity.
    /// Strictly monotone in `1 − similarity` but free of underflow ties far
    /// from the training data.
    pub fn fault_score(&self, x: &FeatureVector) -> Result<f64> {
        Ok(0.0 - self.log_score(x)?)
    }

    pub fn classify(&self, x: &FeatureVector, threshold: f64) -> Result<Decision> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::InvalidConfig(format!(
                "threshold must be in [0, 1], got {threshold}"
            )));
        }
        Ok(if self.score(x)? >= threshold {
            Decision::Accept
        } else {
            Decision::Reject
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: OccModel = serde_json::from_str(text).map_err(|e| Error::Format(format!("model file: {e}")))?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "model format version {} is not supported (expected {MODEL_FORMAT_VERSION})",
                model.format_version
            )));
        }
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let dim = self.dimension();
        let ok = !self.miners.is_empty()
            && self.standardizer.mean.len() == dim
            && self.standardizer.std.len() == dim
            && self
                .miners
                .iter()
                .all(|m| m.delta > 0.0 && !m.prototypes.is_empty() && m.prototypes.iter().all(|p| p.len() == dim));
        if ok {
            Ok(())
        } else {
            Err(Error::Format("model file is inconsistent".into()))
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
