//! Properties of the default synthetic dataset that the benchmark relies on.

use gearsound::config::PipelineConfig;
use gearsound::pipeline::{FeatureExtractor, FeatureSet};
use gearsound::signal::{generate_dataset, read_manifest, Health, Manifest, Split};
use gearsound::Execution;

/// One-sided Mann–Whitney z statistic for `a` tending to exceed `b`, with
/// the normal approximation (no ties are expected on continuous features).
fn mann_whitney_z(a: &[f64], b: &[f64]) -> f64 {
    let u: f64 = a
        .iter()
        .map(|x| {
            b.iter()
                .map(|y| {
                    if x > y {
                        1.0
                    } else if x == y {
                        0.5
                    } else {
                        0.0
                    }
                })
                .sum::<f64>()
        })
        .sum();
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    (u - n1 * n2 / 2.0) / (n1 * n2 * (n1 + n2 + 1.0) / 12.0).sqrt()
}

fn default_dataset(dir: &std::path::Path) -> Manifest {
    let c = PipelineConfig::default();
    generate_dataset(&c.dataset, &c.geometry, dir, c.seed, Execution::Parallel).unwrap()
}

#[test]
fn default_dataset_layout_and_tvpa_separability() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = default_dataset(dir.path());

    assert_eq!(manifest.samples.len(), 138);
    assert_eq!(manifest.split(Split::Train).count(), 56);
    assert_eq!(manifest.split(Split::Test).count(), 82);
    let noisy = manifest
        .samples
        .iter()
        .filter(|s| s.noise.kind.as_str() != "none")
        .count();
    assert_eq!(noisy, 43);
    assert!(manifest.split(Split::Train).all(|s| s.label != Health::MajorFault));
    assert_eq!(
        read_manifest(&dir.path().join("manifest.csv")).unwrap().samples.len(),
        138
    );

    // only the two classes being compared need features
    let subset = Manifest {
        samples: manifest
            .samples
            .iter()
            .filter(|s| s.label != Health::MinorFault)
            .cloned()
            .collect(),
        root: manifest.root.clone(),
    };
    let c = PipelineConfig::default();
    let extractor = FeatureExtractor::new(&c.geometry, &c.analysis).unwrap();
    let bundles = extractor
        .extract_manifest(
            &subset,
            c.dataset.calibration_pa_per_fullscale,
            &[FeatureSet::Tvpa],
            Execution::Parallel,
        )
        .unwrap();
    let column = |j: usize, label: Health| -> Vec<f64> {
        subset
            .samples
            .iter()
            .zip(&bundles)
            .filter(|(s, _)| s.label == label)
            .map(|(_, b)| b.tvpa.as_ref().unwrap().values()[j])
            .collect()
    };
    // z above the one-sided 5 % critical value of the standard normal
    for j in 0..3 {
        let z = mann_whitney_z(&column(j, Health::MajorFault), &column(j, Health::Healthy));
        assert!(z > 1.6449, "TVPA feature {j}: z = {z}");
    }
}
