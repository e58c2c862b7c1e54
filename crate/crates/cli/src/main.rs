use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use gearsound::config::{LoadedConfig, PipelineConfig};
use gearsound::eval::{benchmark_run, score_test_split, Positives};
use gearsound::occ::{fit_brm, Decision, OccModel};
use gearsound::pipeline::{FeatureExtractor, FeatureSet};
use gearsound::signal::{generate_dataset, read_manifest, Manifest, Split};
use gearsound::{Error, Execution, FeatureVector};

/// Acoustic end-of-line fault detection for geared motors.
#[derive(Debug, Parser)]
#[command(name = "gearsound", version)]
struct Cli {
    /// TOML pipeline configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the seed from the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a labelled dataset: WAV files plus manifest.csv.
    Generate {
        #[arg(long)]
        out: PathBuf,
    },
    /// Write one feature row per manifest sample.
    Features {
        #[command(flatten)]
        input: Input,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the classifier on the train split and save it as JSON.
    Train {
        #[command(flatten)]
        input: Input,
        /// Output model file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Score every manifest sample with a saved model.
    Score {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        model: PathBuf,
        /// Similarity below which a sample is rejected.
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Train and evaluate every feature set; writes report.csv and report.json.
    Benchmark {
        /// Existing dataset; one is generated under `<out>/dataset` otherwise.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the test-split ROC curves roc_h.csv and roc_f.csv.
    Roc {
        #[command(flatten)]
        input: Input,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Input {
    #[arg(long)]
    manifest: PathBuf,
    /// nes, ses, les, spa, tvpa or les+tvpa; the configured set by default.
    #[arg(long)]
    feature_set: Option<FeatureSet>,
}

struct Context {
    config: LoadedConfig,
    exec: Execution,
}

impl Context {
    fn pipeline(&self) -> &PipelineConfig {
        &self.config.config
    }

    fn feature_set(&self, input: &Input) -> FeatureSet {
        input.feature_set.unwrap_or(self.pipeline().feature_set)
    }

    fn extractor(&self) -> Result<FeatureExtractor, Error> {
        FeatureExtractor::new(&self.pipeline().geometry, &self.pipeline().analysis)
    }

    /// Feature vectors of every manifest sample, in manifest order.
    fn features(&self, manifest: &Manifest, set: FeatureSet) -> Result<Vec<FeatureVector>, Error> {
        let extractor = self.extractor()?;
        let calibration = self.pipeline().dataset.calibration_pa_per_fullscale;
        manifest.validate()?;
        self.exec.try_map(&manifest.samples, |s| {
            let signal = manifest.load_signal(s, calibration)?;
            extractor.extract(&signal, set)
        })
    }

    fn echo(&self) {
        println!("seed={} config_digest={}", self.pipeline().seed, self.config.digest);
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    fs::write(path, body).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::IoFailure {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut config = match &cli.config {
        Some(path) => LoadedConfig::load(path)?,
        None => LoadedConfig::from(PipelineConfig::default()),
    };
    if let Some(seed) = cli.seed {
        config.config.seed = seed;
    }
    let ctx = Context {
        config,
        exec: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let c = ctx.pipeline();

    match cli.command {
        Command::Generate { out } => {
            let manifest = generate_dataset(&c.dataset, &c.geometry, &out, c.seed, ctx.exec)?;
            ctx.echo();
            println!(
                "wrote {} samples to {}",
                manifest.samples.len(),
                out.join("manifest.csv").display()
            );
        }
        Command::Features { input, out } => {
            let manifest = read_manifest(&input.manifest)?;
            let features = ctx.features(&manifest, ctx.feature_set(&input))?;
            let mut body = String::from("id,label,split");
            if let Some(first) = features.first() {
                for name in first.names() {
                    write!(body, ",{name}").unwrap();
                }
            }
            body.push('\n');
            for (s, fv) in manifest.samples.iter().zip(&features) {
                write!(body, "{},{},{}", s.id, s.label.as_str(), s.split).unwrap();
                for v in fv.values() {
                    write!(body, ",{v}").unwrap();
                }
                body.push('\n');
            }
            write_file(&out, &body)?;
            ctx.echo();
        }
        Command::Train { input, out } => {
            let manifest = read_manifest(&input.manifest)?;
            let features = ctx.features(&manifest, ctx.feature_set(&input))?;
            let train: Vec<FeatureVector> = manifest
                .samples
                .iter()
                .zip(features)
                .filter(|(s, _)| s.split == Split::Train)
                .map(|(_, fv)| fv)
                .collect();
            let model = fit_brm(&train, &c.brm_params(), ctx.exec)?;
            write_file(&out, &model.to_json())?;
            ctx.echo();
        }
        Command::Score {
            input,
            model,
            threshold,
            out,
        } => {
            let model = OccModel::load(&model)?;
            let manifest = read_manifest(&input.manifest)?;
            let features = ctx.features(&manifest, ctx.feature_set(&input))?;
            let mut body = String::from("id,label,split,similarity,fault_score,decision\n");
            for (s, fv) in manifest.samples.iter().zip(&features) {
                let decision = match model.classify(fv, threshold)? {
                    Decision::Accept => "accept",
                    Decision::Reject => "reject",
                };
                if fv.names() != model.feature_names.as_slice() {
                    return Err(Error::Format("model was trained on differently named features".into()));
                }
                writeln!(
                    body,
                    "{},{},{},{},{},{decision}",
                    s.id,
                    s.label.as_str(),
                    s.split,
                    model.score(fv)?,
                    model.fault_score(fv)?
                )
                .unwrap();
            }
            write_file(&out, &body)?;
            ctx.echo();
        }
        Command::Benchmark { manifest, out } => {
            let manifest = match manifest {
                Some(path) => read_manifest(&path)?,
                None => generate_dataset(&c.dataset, &c.geometry, &out.join("dataset"), c.seed, ctx.exec)?,
            };
            let report = benchmark_run(&manifest, &ctx.config, ctx.exec)?;
            report.write(&out)?;
            ctx.echo();
            print!("{}", report.to_csv());
        }
        Command::Roc { input, out } => {
            let manifest = read_manifest(&input.manifest)?;
            let set = ctx.feature_set(&input);
            let bundles = ctx.extractor()?.extract_manifest(
                &manifest,
                c.dataset.calibration_pa_per_fullscale,
                &[set],
                ctx.exec,
            )?;
            let scores = score_test_split(&manifest, &bundles, set, &c.brm_params(), ctx.exec)?;
            fs::create_dir_all(&out).map_err(|e| io_error(&out, e))?;
            for (name, positives) in [("roc_h.csv", Positives::AnyFault), ("roc_f.csv", Positives::MajorFault)] {
                let path = out.join(name);
                let file = fs::File::create(&path).map_err(|e| io_error(&path, e))?;
                scores.roc(positives)?.write_csv(std::io::BufWriter::new(file))?;
            }
            ctx.echo();
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
