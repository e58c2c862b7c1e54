use std::path::Path;

use serde::{Deserialize, Serialize};

use super::roc::{auc, roc_curve, RocCurve};
use crate::config::LoadedConfig;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::feature::FeatureVector;
use crate::occ::{fit_brm, BrmParams};
use crate::pipeline::{FeatureBundle, FeatureExtractor, FeatureSet};
use crate::signal::{Health, Manifest, Split};

/// Which labels count as positive when scoring a test split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Positives {
    /// Minor and major faults against healthy motors.
    AnyFault,
    /// Major faults against healthy and minor-fault motors.
    MajorFault,
}

impl Positives {
    pub fn is_positive(self, label: Health) -> bool {
        match self {
            Positives::AnyFault => label != Health::Healthy,
            Positives::MajorFault => label == Health::MajorFault,
        }
    }
}

/// Fault scores of the test split for one feature set.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitScores {
    pub ids: Vec<String>,
    pub labels: Vec<Health>,
    /// `−ln(similarity)`, higher is more suspicious.
    pub fault_scores: Vec<f64>,
}

impl SplitScores {
    pub fn roc(&self, positives: Positives) -> Result<RocCurve> {
        let labels: Vec<bool> = self.labels.iter().map(|&l| positives.is_positive(l)).collect();
        roc_curve(&self.fault_scores, &labels)
    }
}

/// Fits on the train split and scores the test split, using features
/// already extracted in manifest order.
pub fn score_test_split(
    manifest: &Manifest,
    bundles: &[FeatureBundle],
    set: FeatureSet,
    params: &BrmParams,
    exec: Execution,
) -> Result<SplitScores> {
    let pick = |split: Split| -> Result<Vec<(usize, FeatureVector)>> {
        manifest
            .samples
            .iter()
            .enumerate()
            .filter(|(_, s)| s.split == split)
            .map(|(i, _)| {
                bundles[i]
                    .get(set)
                    .map(|v| (i, v))
                    .ok_or_else(|| Error::Format(format!("features for {} were not extracted", set.name())))
            })
            .collect()
    };
    let train: Vec<FeatureVector> = pick(Split::Train)?.into_iter().map(|(_, v)| v).collect();
    let model = fit_brm(&train, params, exec)?;
    let test = pick(Split::Test)?;
    let fault_scores = exec.try_map(&test, |(_, v)| model.fault_score(v))?;
    Ok(SplitScores {
        ids: test.iter().map(|(i, _)| manifest.samples[*i].id.clone()).collect(),
        labels: test.iter().map(|(i, _)| manifest.samples[*i].label).collect(),
        fault_scores,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub feature_set: String,
    pub auc_h: f64,
    pub auc_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub seed: u64,
    pub config_digest: String,
    pub train_samples: usize,
    pub test_samples: usize,
    pub rows: Vec<BenchmarkRow>,
}

impl BenchmarkReport {
    pub fn row(&self, set: FeatureSet) -> Option<&BenchmarkRow> {
        self.rows.iter().find(|r| r.feature_set == set.name())
    }

    /// `feature_set,auc_h,auc_f`, one row per feature set.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("feature_set,auc_h,auc_f\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.feature_set, r.auc_h, r.auc_f));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes `report.csv` and `report.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, body) in [("report.csv", self.to_csv()), ("report.json", self.to_json())] {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

/// Extracts every feature set for every sample, then for each set fits the
/// classifier on the train split and reports AUC_h and AUC_f on the test split.
pub fn benchmark_run(manifest: &Manifest, config: &LoadedConfig, exec: Execution) -> Result<BenchmarkReport> {
    manifest.validate()?;
    let c = &config.config;
    let extractor = FeatureExtractor::new(&c.geometry, &c.analysis)?;
    let bundles =
        extractor.extract_manifest(manifest, c.dataset.calibration_pa_per_fullscale, &FeatureSet::ALL, exec)?;
    let params = c.brm_params();
    let rows = FeatureSet::ALL
        .into_iter()
        .map(|set| {
            let scores = score_test_split(manifest, &bundles, set, &params, exec)?;
            Ok(BenchmarkRow {
                feature_set: set.name().to_string(),
                auc_h: auc(&scores.roc(Positives::AnyFault)?),
                auc_f: auc(&scores.roc(Positives::MajorFault)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchmarkReport {
        seed: c.seed,
        config_digest: config.digest.clone(),
        train_samples: manifest.split(Split::Train).count(),
        test_samples: manifest.split(Split::Test).count(),
        rows,
    })
}
