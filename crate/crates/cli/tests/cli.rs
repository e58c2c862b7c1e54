use std::path::Path;
use std::process::{Command, Output};

fn gearsound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gearsound"))
        .args(args)
        .output()
        .unwrap()
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.toml");
    std::fs::write(
        &path,
        "seed = 3\n\n[occ]\nbag_count = 10\n\n[dataset]\nduration_s = 2.5\ntrain_healthy = 4\ntrain_minor = 2\n\
         test_healthy = 2\ntest_minor = 1\ntest_major = 2\nnoisy = 1\n",
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(gearsound(&[]).status.code(), Some(1));
    assert_eq!(gearsound(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(gearsound(&["generate"]).status.code(), Some(1));
    assert_eq!(gearsound(&["--help"]).status.code(), Some(0));
}

#[test]
fn generate_train_score_roundtrip_and_dimension_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let data = dir.path().join("data");
    let data = data.to_str().unwrap();
    let out = gearsound(&["--config", &cfg, "generate", "--out", data]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("seed=3 config_digest="));
    let manifest = format!("{data}/manifest.csv");
    assert_eq!(std::fs::read_to_string(&manifest).unwrap().lines().count(), 1 + 11);

    let model = dir.path().join("model.json");
    let model = model.to_str().unwrap();
    let out = gearsound(&[
        "--config",
        &cfg,
        "train",
        "--manifest",
        &manifest,
        "--feature-set",
        "les",
        "--out",
        model,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let scores = dir.path().join("scores.csv");
    let scores = scores.to_str().unwrap();
    let out = gearsound(&[
        "--config",
        &cfg,
        "score",
        "--manifest",
        &manifest,
        "--feature-set",
        "les",
        "--model",
        model,
        "--out",
        scores,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = std::fs::read_to_string(scores).unwrap();
    assert!(body.starts_with("id,label,split,similarity,fault_score,decision\n"));
    assert_eq!(body.lines().count(), 12);

    let out = gearsound(&[
        "--config",
        &cfg,
        "score",
        "--manifest",
        &manifest,
        "--feature-set",
        "tvpa",
        "--model",
        model,
        "--out",
        scores,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("dimension"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn default_generate_writes_138_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = gearsound(&["generate", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let manifest = std::fs::read_to_string(dir.path().join("manifest.csv")).unwrap();
    assert_eq!(manifest.lines().count(), 139);
}
