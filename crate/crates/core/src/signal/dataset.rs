//! Synthetic dataset generation and the CSV manifest.
//!
//! The default configuration mirrors the reference study design: 56 training
//! samples of acceptable quality (31 healthy, 25 minor faults) and 82 test
//! samples including 22 major faults, with 43 samples carrying deliberate
//! background noise. Noisy samples are placed in the test split first.
//!
//! Sample `i` draws its parameters from ChaCha stream `i + 1` of the dataset
//! seed, so generation order does not affect the output.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::synth::{synthesize_motor_sound, NoiseKind, NoiseSpec, SyntheticMotorSpec};
use super::wav::{load_wav_calibrated, save_wav_as, WavEncoding};
use super::{Health, TimeSignal};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gearbox::GearGeometry;

pub const MANIFEST_HEADER: [&str; 6] = ["id", "path", "label", "noise_kind", "noise_level_db", "split"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            other => Err(Error::Format(format!("unknown split {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSample {
    pub id: String,
    /// Path as written in the manifest, relative to the manifest's directory.
    pub signal_path: PathBuf,
    pub label: Health,
    pub noise: NoiseSpec,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub samples: Vec<DatasetSample>,
    /// Directory relative signal paths are resolved against.
    pub root: PathBuf,
}

impl Manifest {
    pub fn resolve(&self, sample: &DatasetSample) -> PathBuf {
        if sample.signal_path.is_absolute() {
            sample.signal_path.clone()
        } else {
            self.root.join(&sample.signal_path)
        }
    }

    pub fn load_signal(&self, sample: &DatasetSample, calibration: f64) -> Result<TimeSignal> {
        load_wav_calibrated(self.resolve(sample), calibration)
    }

    pub fn split(&self, split: Split) -> impl Iterator<Item = &DatasetSample> {
        self.samples.iter().filter(move |s| s.split == split)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = self
            .samples
            .iter()
            .find(|s| s.split == Split::Train && s.label == Health::MajorFault)
        {
            return Err(Error::InvalidConfig(format!(
                "sample {} is a major fault in the train split",
                s.id
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetConfig {
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    pub calibration_pa_per_fullscale: f64,
    pub train_healthy: i64,
    pub train_minor: i64,
    pub test_healthy: i64,
    pub test_minor: i64,
    pub test_major: i64,
    /// Samples that receive deliberate contamination noise.
    pub noisy: i64,
    /// Motor base level range in dB SPL (uniform per sample).
    pub base_spl_db: [f64; 2],
    /// Relative deviation of the actual speed from the rated speed (uniform ±).
    pub speed_offset_rel: f64,
    pub speed_jitter_rel: f64,
    pub resonance_hz: [f64; 2],
    pub minor_impulse_gain: [f64; 2],
    pub major_impulse_gain: [f64; 2],
    /// Range of the impulse intermittency depth, see `SyntheticMotorSpec`.
    pub intermittency: [f64; 2],
    pub noise_level_db: [f64; 2],
    /// Probability that a noisy sample's contamination covers only part of the record.
    pub partial_noise_probability: f64,
    pub inverter_tone: bool,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            sample_rate_hz: 48000.0,
            duration_s: 5.0,
            calibration_pa_per_fullscale: 1.0,
            train_healthy: 31,
            train_minor: 25,
            test_healthy: 32,
            test_minor: 28,
            test_major: 22,
            noisy: 43,
            base_spl_db: [64.0, 76.0],
            speed_offset_rel: 0.005,
            speed_jitter_rel: 0.01,
            resonance_hz: [1500.0, 4500.0],
            minor_impulse_gain: [1.5, 3.5],
            major_impulse_gain: [4.0, 8.0],
            intermittency: [0.8, 1.0],
            noise_level_db: [-12.0, 0.0],
            partial_noise_probability: 0.5,
            inverter_tone: true,
        }
    }
}

fn check_range(name: &str, r: [f64; 2]) -> Result<()> {
    if !(r[0].is_finite() && r[1].is_finite() && r[0] <= r[1]) {
        return Err(Error::InvalidConfig(format!("{name} range {r:?} is not ordered")));
    }
    Ok(())
}

fn draw(rng: &mut ChaCha8Rng, r: [f64; 2]) -> f64 {
    if r[0] == r[1] {
        r[0]
    } else {
        rng.gen_range(r[0]..r[1])
    }
}

impl DatasetConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("train_healthy", self.train_healthy),
            ("train_minor", self.train_minor),
            ("test_healthy", self.test_healthy),
            ("test_minor", self.test_minor),
            ("test_major", self.test_major),
            ("noisy", self.noisy),
        ];
        if let Some((name, v)) = counts.iter().find(|(_, v)| *v < 0) {
            return Err(Error::InvalidConfig(format!("{name} must not be negative, got {v}")));
        }
        if self.noisy > self.total() as i64 {
            return Err(Error::InvalidConfig(format!(
                "{} noisy samples requested but only {} samples in total",
                self.noisy,
                self.total()
            )));
        }
        if !(self.sample_rate_hz > 0.0 && self.duration_s > 0.0 && self.calibration_pa_per_fullscale > 0.0) {
            return Err(Error::InvalidConfig(
                "sample rate, duration and calibration must be positive".into(),
            ));
        }
        check_range("base_spl_db", self.base_spl_db)?;
        check_range("resonance_hz", self.resonance_hz)?;
        check_range("minor_impulse_gain", self.minor_impulse_gain)?;
        check_range("major_impulse_gain", self.major_impulse_gain)?;
        check_range("noise_level_db", self.noise_level_db)?;
        check_range("intermittency", self.intermittency)?;
        if self.intermittency[0] < 0.0 || self.intermittency[1] > 1.0 {
            return Err(Error::InvalidConfig("intermittency must lie in [0, 1]".into()));
        }
        if self.minor_impulse_gain[0] <= 0.0 || self.major_impulse_gain[0] <= 0.0 {
            return Err(Error::InvalidConfig("fault impulse gains must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.partial_noise_probability) {
            return Err(Error::InvalidConfig(
                "partial_noise_probability must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }

    pub fn total(&self) -> usize {
        [
            self.train_healthy,
            self.train_minor,
            self.test_healthy,
            self.test_minor,
            self.test_major,
        ]
        .iter()
        .map(|&c| c.max(0) as usize)
        .sum()
    }

    fn layout(&self) -> Vec<(Health, Split)> {
        let groups = [
            (Health::Healthy, Split::Train, self.train_healthy),
            (Health::MinorFault, Split::Train, self.train_minor),
            (Health::Healthy, Split::Test, self.test_healthy),
            (Health::MinorFault, Split::Test, self.test_minor),
            (Health::MajorFault, Split::Test, self.test_major),
        ];
        groups
            .iter()
            .flat_map(|&(h, s, c)| std::iter::repeat_n((h, s), c as usize))
            .collect()
    }
}

/// Everything needed to synthesize one sample.
#[derive(Debug, Clone)]
struct Plan {
    sample: DatasetSample,
    spec: SyntheticMotorSpec,
    seed: u64,
}

fn plan(config: &DatasetConfig, geometry: &GearGeometry, seed: u64) -> Vec<Plan> {
    let layout = config.layout();
    // noisy samples go to test first, then spill into train
    let mut order_rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test_idx: Vec<usize> = (0..layout.len()).filter(|&i| layout[i].1 == Split::Test).collect();
    let mut train_idx: Vec<usize> = (0..layout.len()).filter(|&i| layout[i].1 == Split::Train).collect();
    test_idx.shuffle(&mut order_rng);
    train_idx.shuffle(&mut order_rng);
    let mut noise_kind = vec![NoiseKind::None; layout.len()];
    for (j, &i) in test_idx
        .iter()
        .chain(&train_idx)
        .take(config.noisy as usize)
        .enumerate()
    {
        noise_kind[i] = NoiseKind::CONTAMINANTS[j % NoiseKind::CONTAMINANTS.len()];
    }

    layout
        .iter()
        .enumerate()
        .map(|(i, &(label, split))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let speed = 1.0 + config.speed_offset_rel * rng.gen_range(-1.0..=1.0);
            let mut spec = SyntheticMotorSpec::new(geometry.at_speed(geometry.rated_speed_rpm * speed), label);
            spec.base_spl_db = draw(&mut rng, config.base_spl_db);
            spec.resonance_hz = draw(&mut rng, config.resonance_hz);
            spec.speed_jitter_rel = config.speed_jitter_rel;
            spec.include_inverter_tone = config.inverter_tone;
            spec.impulse_gain = match label {
                Health::Healthy => 0.0,
                Health::MinorFault => draw(&mut rng, config.minor_impulse_gain),
                Health::MajorFault => draw(&mut rng, config.major_impulse_gain),
            };
            spec.intermittency = draw(&mut rng, config.intermittency);
            let kind = noise_kind[i];
            let noise = if kind == NoiseKind::None {
                NoiseSpec::none()
            } else {
                let level = draw(&mut rng, config.noise_level_db);
                let window_s = if rng.gen_bool(config.partial_noise_probability) {
                    let d = config.duration_s;
                    let len = rng.gen_range((0.15 * d)..(0.85 * d));
                    let start = rng.gen_range(0.0..(d - len));
                    Some((start, start + len))
                } else {
                    None
                };
                NoiseSpec {
                    kind,
                    level_db_rel: level,
                    window_s,
                }
            };
            let id = format!("s{i:04}");
            Plan {
                sample: DatasetSample {
                    signal_path: PathBuf::from("wav").join(format!("{id}.wav")),
                    id,
                    label,
                    noise,
                    split,
                },
                spec,
                seed: rng.gen(),
            }
        })
        .collect()
}

/// Synthesizes every sample of `config`, writes `wav/<id>.wav` files and
/// `manifest.csv` under `out_dir`, and returns the manifest.
pub fn generate_dataset(
    config: &DatasetConfig,
    geometry: &GearGeometry,
    out_dir: &Path,
    seed: u64,
    exec: Execution,
) -> Result<Manifest> {
    config.validate()?;
    geometry.validate()?;
    let plans = plan(config, geometry, seed);
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    if !plans.is_empty() {
        let wav_dir = out_dir.join("wav");
        std::fs::create_dir_all(&wav_dir).map_err(|e| Error::io(&wav_dir, e))?;
    }
    exec.try_map(&plans, |p| {
        let signal = synthesize_motor_sound(
            &p.spec,
            &p.sample.noise,
            config.duration_s,
            config.sample_rate_hz,
            p.seed,
        )?;
        let calibrated = TimeSignal::with_calibration(
            signal.into_samples(),
            config.sample_rate_hz,
            config.calibration_pa_per_fullscale,
        )?;
        save_wav_as(&calibrated, out_dir.join(&p.sample.signal_path), WavEncoding::Float32)
    })?;
    let manifest = Manifest {
        samples: plans.into_iter().map(|p| p.sample).collect(),
        root: out_dir.to_path_buf(),
    };
    manifest.validate()?;
    write_manifest(&manifest, &out_dir.join("manifest.csv"))?;
    Ok(manifest)
}

pub fn write_manifest(manifest: &Manifest, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path, e))?;
    let io = |e: csv::Error| Error::io(path, e);
    w.write_record(MANIFEST_HEADER).map_err(io)?;
    for s in &manifest.samples {
        w.write_record([
            s.id.as_str(),
            &s.signal_path.to_string_lossy().replace('\\', "/"),
            s.label.as_str(),
            s.noise.kind.as_str(),
            &format!("{:.3}", s.noise.level_db_rel),
            &s.split.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a manifest; relative paths resolve against the file's directory.
/// Noise windows are not stored in the manifest and read back as `None`.
pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::io(path, e))?;
    let header = r.headers().map_err(|e| Error::Format(e.to_string()))?.clone();
    if header.iter().ne(MANIFEST_HEADER) {
        return Err(Error::Format(format!(
            "manifest header must be {}, found {}",
            MANIFEST_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut samples = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
        let field = |i: usize| rec.get(i).unwrap_or_default();
        let level: f64 = field(4)
            .parse()
            .map_err(|_| Error::Format(format!("row {}: bad noise level {:?}", line + 1, field(4))))?;
        samples.push(DatasetSample {
            id: field(0).to_string(),
            signal_path: PathBuf::from(field(1)),
            label: field(2).parse()?,
            noise: NoiseSpec {
                kind: field(3).parse()?,
                level_db_rel: level,
                window_s: None,
            },
            split: field(5).parse()?,
        });
    }
    let manifest = Manifest {
        samples,
        root: path.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    manifest.validate()?;
    Ok(manifest)
}
