use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::TimeSignal;
use crate::error::{Error, Result};

/// Sample encoding used when writing WAV files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WavEncoding {
    Pcm16,
    Pcm24,
    #[default]
    Float32,
}

impl WavEncoding {
    fn spec(self, sample_rate: u32) -> WavSpec {
        let (bits_per_sample, sample_format) = match self {
            WavEncoding::Pcm16 => (16, SampleFormat::Int),
            WavEncoding::Pcm24 => (24, SampleFormat::Int),
            WavEncoding::Float32 => (32, SampleFormat::Float),
        };
        WavSpec {
            channels: 1,
            sample_rate,
            bits_per_sample,
            sample_format,
        }
    }
}

// Integer PCM maps ±(2^(bits-1) - 1) onto ±1.0 so full scale is symmetric.
fn int_scale(bits: u16) -> f64 {
    ((1i64 << (bits - 1)) - 1) as f64
}

fn map_read_err(path: &Path, err: hound::Error) -> Error {
    match err {
        // the file is already open, so read failures mean truncated or malformed data
        hound::Error::IoError(e) => Error::CorruptHeader(format!("{}: {e}", path.display())),
        hound::Error::FormatError(msg) => Error::CorruptHeader(msg.to_string()),
        hound::Error::TooWide => Error::UnsupportedEncoding("sample width too large".into()),
        hound::Error::Unsupported => Error::UnsupportedEncoding("unsupported WAV feature".into()),
        hound::Error::InvalidSampleFormat => Error::UnsupportedEncoding("invalid sample format".into()),
        other => Error::CorruptHeader(other.to_string()),
    }
}

/// Loads a mono WAV file, treating full scale as 1 Pa.
pub fn load_wav(path: impl AsRef<Path>) -> Result<TimeSignal> {
    load_wav_calibrated(path, 1.0)
}

/// Loads a mono PCM16/PCM24/float32 WAV file. Samples are scaled to [-1, 1]
/// full scale, then multiplied by `calibration_pa_per_fullscale`.
pub fn load_wav_calibrated(path: impl AsRef<Path>, calibration_pa_per_fullscale: f64) -> Result<TimeSignal> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = WavReader::new(std::io::BufReader::new(file)).map_err(|e| map_read_err(path, e))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::UnsupportedChannels(spec.channels));
    }
    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, bits @ (16 | 24)) => {
            let scale = int_scale(bits);
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| (v as f64 / scale).clamp(-1.0, 1.0) * calibration_pa_per_fullscale))
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| map_read_err(path, e))?
        }
        (SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(|v| v as f64 * calibration_pa_per_fullscale))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| map_read_err(path, e))?,
        (fmt, bits) => {
            return Err(Error::UnsupportedEncoding(format!("{fmt:?} with {bits} bits")));
        }
    };
    if samples.is_empty() {
        return Err(Error::CorruptHeader("no samples in data chunk".into()));
    }
    TimeSignal::with_calibration(samples, spec.sample_rate as f64, calibration_pa_per_fullscale)
}

/// Writes the signal as 32-bit float WAV.
pub fn save_wav(signal: &TimeSignal, path: impl AsRef<Path>) -> Result<()> {
    save_wav_as(signal, path, WavEncoding::Float32)
}

/// Writes the signal in full-scale units (samples divided by the calibration).
/// Integer encodings clip at ±1.0 full scale.
pub fn save_wav_as(signal: &TimeSignal, path: impl AsRef<Path>, encoding: WavEncoding) -> Result<()> {
    let path = path.as_ref();
    let rate = signal.sample_rate_hz();
    if rate.fract() != 0.0 || rate > u32::MAX as f64 {
        return Err(Error::InvalidSignal(format!(
            "WAV needs an integer sample rate, got {rate}"
        )));
    }
    let mut writer = WavWriter::create(path, encoding.spec(rate as u32)).map_err(|e| Error::io(path, e))?;
    let cal = signal.calibration_pa_per_fullscale();
    let write_err = |e: hound::Error| Error::io(path, e);
    match encoding {
        WavEncoding::Float32 => {
            for &s in signal.samples() {
                writer.write_sample((s / cal) as f32).map_err(write_err)?;
            }
        }
        WavEncoding::Pcm16 | WavEncoding::Pcm24 => {
            let bits = if encoding == WavEncoding::Pcm16 { 16 } else { 24 };
            let scale = int_scale(bits);
            for &s in signal.samples() {
                let q = ((s / cal) * scale).round().clamp(-scale, scale) as i32;
                writer.write_sample(q).map_err(write_err)?;
            }
        }
    }
    writer.finalize().map_err(|e| Error::io(path, e))
}
