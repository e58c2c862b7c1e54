//! Synthetic geared-motor recordings.
//!
//! A recording is the sum of
//! - a stationary motor base: pink-tilted broadband noise, mesh tones with
//!   shaft-rate modulation, and an optional 8 kHz inverter tone,
//! - for faulty motors, a train of exponentially damped sinusoids at a
//!   structural resonance, repeating at a shaft frequency with period jitter,
//! - an optional contamination noise restricted to a time window.
//!
//! Base, fault and noise draw from separate ChaCha streams of the same seed,
//! so the same seed with and without noise shares the motor sound exactly.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{rms, Health, TimeSignal, REFERENCE_PRESSURE_PA};
use crate::dsp::fft;
use crate::error::{Error, Result};
use crate::gearbox::{mesh_frequencies, shaft_frequencies, GearGeometry};

/// Fault impulses are modelled inside this resonance band.
pub const FAULT_BAND_HZ: (f64, f64) = (850.0, 5100.0);
pub const INVERTER_TONE_HZ: f64 = 8000.0;
/// Impulse decay constant; five constants (4 ms) bring the ringing below 1 %.
pub const IMPULSE_DECAY_S: f64 = 0.8e-3;

const STREAM_BASE: u64 = 1;
const STREAM_FAULT: u64 = 2;
const STREAM_NOISE: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    None,
    Hammering,
    AirPressure,
    ElectricWrench,
    Speech,
    Music,
    Ventilation,
}

impl NoiseKind {
    /// Every kind that actually adds noise.
    pub const CONTAMINANTS: [NoiseKind; 6] = [
        NoiseKind::Hammering,
        NoiseKind::AirPressure,
        NoiseKind::ElectricWrench,
        NoiseKind::Speech,
        NoiseKind::Music,
        NoiseKind::Ventilation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NoiseKind::None => "none",
            NoiseKind::Hammering => "hammering",
            NoiseKind::AirPressure => "air_pressure",
            NoiseKind::ElectricWrench => "electric_wrench",
            NoiseKind::Speech => "speech",
            NoiseKind::Music => "music",
            NoiseKind::Ventilation => "ventilation",
        }
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(NoiseKind::None)
            .chain(NoiseKind::CONTAMINANTS)
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Format(format!("unknown noise kind {s:?}")))
    }
}

/// Contamination noise: its kind, RMS level relative to the motor base
/// (over the active window), and the optional time window it occupies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub level_db_rel: f64,
    pub window_s: Option<(f64, f64)>,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self {
            kind: NoiseKind::None,
            level_db_rel: 0.0,
            window_s: None,
        }
    }

    pub fn new(kind: NoiseKind, level_db_rel: f64) -> Self {
        Self {
            kind,
            level_db_rel,
            window_s: None,
        }
    }

    pub fn validate(&self, duration_s: f64) -> Result<()> {
        if !self.level_db_rel.is_finite() {
            return Err(Error::InvalidSpec("noise level must be finite".into()));
        }
        if let Some((start, end)) = self.window_s {
            if !(start >= 0.0 && start < end && end <= duration_s) {
                return Err(Error::InvalidSpec(format!(
                    "noise window [{start}, {end}] s does not lie within [0, {duration_s}] s"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticMotorSpec {
    pub geometry: GearGeometry,
    pub health: Health,
    pub resonance_hz: f64,
    /// Peak impulse amplitude relative to the base RMS; zero iff healthy.
    pub impulse_gain: f64,
    /// Relative period jitter of the impulse train.
    pub speed_jitter_rel: f64,
    pub include_inverter_tone: bool,
    /// 1-based shaft whose rotation rate the impulses repeat at.
    pub fault_shaft: usize,
    /// RMS level of the motor base in dB SPL.
    pub base_spl_db: f64,
    /// Depth in `[0, 1]` by which impulses weaken outside random contact
    /// episodes; zero gives a uniform impulse train.
    pub intermittency: f64,
}

impl SyntheticMotorSpec {
    pub const DEFAULT_MINOR_GAIN: f64 = 1.5;
    pub const DEFAULT_MAJOR_GAIN: f64 = 3.0;

    pub fn new(geometry: GearGeometry, health: Health) -> Self {
        let impulse_gain = match health {
            Health::Healthy => 0.0,
            Health::MinorFault => Self::DEFAULT_MINOR_GAIN,
            Health::MajorFault => Self::DEFAULT_MAJOR_GAIN,
        };
        Self {
            geometry,
            health,
            resonance_hz: 2800.0,
            impulse_gain,
            speed_jitter_rel: 0.01,
            include_inverter_tone: true,
            fault_shaft: 1,
            base_spl_db: 70.0,
            intermittency: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry
            .validate()
            .map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let (lo, hi) = FAULT_BAND_HZ;
        if !(self.resonance_hz >= lo && self.resonance_hz <= hi) {
            return Err(Error::InvalidSpec(format!(
                "resonance {} Hz outside [{lo}, {hi}] Hz",
                self.resonance_hz
            )));
        }
        if !(self.impulse_gain >= 0.0 && self.impulse_gain.is_finite()) {
            return Err(Error::InvalidSpec("impulse gain must be finite and >= 0".into()));
        }
        if (self.impulse_gain == 0.0) != (self.health == Health::Healthy) {
            return Err(Error::InvalidSpec(format!(
                "impulse gain {} inconsistent with health {}",
                self.impulse_gain, self.health
            )));
        }
        if !(0.0..0.5).contains(&self.speed_jitter_rel) {
            return Err(Error::InvalidSpec("speed jitter must lie in [0, 0.5)".into()));
        }
        if self.fault_shaft == 0 || self.fault_shaft > self.geometry.stage_count() + 1 {
            return Err(Error::InvalidSpec(format!(
                "fault shaft {} does not exist",
                self.fault_shaft
            )));
        }
        if !(0.0..=1.0).contains(&self.intermittency) {
            return Err(Error::InvalidSpec("intermittency must lie in [0, 1]".into()));
        }
        if !self.base_spl_db.is_finite() {
            return Err(Error::InvalidSpec("base level must be finite".into()));
        }
        Ok(())
    }

    pub fn fault_frequency_hz(&self) -> f64 {
        shaft_frequencies(&self.geometry)[self.fault_shaft - 1]
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// White Gaussian noise coloured by `gain(f)` in the frequency domain,
/// normalized to unit RMS (or all zeros if the gain removes everything).
fn shaped_noise(n: usize, fs: f64, rng: &mut impl Rng, gain: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut buf: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), 0.0))
        .collect();
    fft::forward_in_place(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let kk = if k <= n / 2 { k } else { n - k };
        *c *= gain(kk as f64 * fs / n as f64);
    }
    fft::inverse_in_place(&mut buf);
    let mut out: Vec<f64> = buf.iter().map(|c| c.re).collect();
    normalize_rms(&mut out, 1.0);
    out
}

fn band_gain(f: f64, lo: f64, hi: f64) -> f64 {
    // first-order skirts on both sides
    let hp = (f / lo).powi(2) / (1.0 + (f / lo).powi(2));
    let lp = 1.0 / (1.0 + (f / hi).powi(2));
    (hp * lp).sqrt()
}

fn normalize_rms(x: &mut [f64], target: f64) {
    let r = rms(x);
    if r > 0.0 {
        let g = target / r;
        x.iter_mut().for_each(|v| *v *= g);
    }
}

fn motor_base(spec: &SyntheticMotorSpec, n: usize, fs: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut base = shaped_noise(n, fs, rng, |f| {
        if f < 20.0 {
            0.0
        } else {
            (1000.0 / f).sqrt() * band_gain(f, 40.0, 12000.0)
        }
    });
    let shafts = shaft_frequencies(&spec.geometry);
    let meshes = mesh_frequencies(&spec.geometry);
    let mut tones = vec![0.0; n];
    for (s, mesh) in meshes.iter().enumerate() {
        let rot = shafts[s];
        for (h, amp) in [(1.0, 1.0), (2.0, 0.5), (3.0, 0.25)] {
            let phase = rng.gen_range(0.0..2.0 * PI);
            let mod_phase = rng.gen_range(0.0..2.0 * PI);
            for (i, t) in tones.iter_mut().enumerate() {
                let tt = i as f64 / fs;
                let am = 1.0 + 0.1 * (2.0 * PI * rot * tt + mod_phase).cos();
                *t += amp * am * (2.0 * PI * h * mesh * tt + phase).sin();
            }
        }
    }
    for (k, amp) in [(1.0, 0.3), (2.0, 0.15)] {
        let phase = rng.gen_range(0.0..2.0 * PI);
        for (i, t) in tones.iter_mut().enumerate() {
            *t += amp * (2.0 * PI * k * shafts[0] * i as f64 / fs + phase).sin();
        }
    }
    normalize_rms(&mut tones, 0.7);
    for (b, t) in base.iter_mut().zip(&tones) {
        *b += t;
    }
    let target = REFERENCE_PRESSURE_PA * 10f64.powf(spec.base_spl_db / 20.0);
    normalize_rms(&mut base, target);
    if spec.include_inverter_tone && INVERTER_TONE_HZ < fs / 2.0 {
        let phase = rng.gen_range(0.0..2.0 * PI);
        let amp = 0.3 * target * std::f64::consts::SQRT_2;
        for (i, b) in base.iter_mut().enumerate() {
            *b += amp * (2.0 * PI * INVERTER_TONE_HZ * i as f64 / fs + phase).sin();
        }
    }
    base
}

fn add_damped_ring(out: &mut [f64], fs: f64, start_s: f64, amp: f64, freq: f64, decay_s: f64) {
    let first = (start_s * fs).ceil().max(0.0) as usize;
    let last = ((start_s + 6.0 * decay_s) * fs) as usize;
    for i in first..=last.min(out.len().saturating_sub(1)) {
        let tau = i as f64 / fs - start_s;
        out[i] += amp * (-tau / decay_s).exp() * (2.0 * PI * freq * tau).sin();
    }
}

fn fault_impulses(spec: &SyntheticMotorSpec, base_rms: f64, n: usize, fs: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut out = vec![0.0; n];
    if spec.impulse_gain == 0.0 {
        return out;
    }
    let period = 1.0 / spec.fault_frequency_hz();
    let duration = n as f64 / fs;
    // contact comes and goes in short episodes a second or two apart
    let episodes = burst_gate(n, fs, rng, (0.1, 0.3), (1.0, 2.5));
    let load = |t: f64| {
        let g = episodes[((t * fs) as usize).min(n - 1)];
        1.0 - spec.intermittency * (1.0 - g)
    };
    let mut t = rng.gen_range(0.0..period);
    while t < duration {
        let spread: f64 = rng.sample(StandardNormal);
        let amp = spec.impulse_gain * base_rms * (0.25 * spread).exp() * load(t);
        add_damped_ring(&mut out, fs, t, amp, spec.resonance_hz, IMPULSE_DECAY_S);
        let jitter = if spec.speed_jitter_rel > 0.0 {
            rng.gen_range(-spec.speed_jitter_rel..=spec.speed_jitter_rel)
        } else {
            0.0
        };
        t += period * (1.0 + jitter);
    }
    out
}

// Smooth on/off gates for bursty sources: alternating on/off spans.
fn burst_gate(n: usize, fs: f64, rng: &mut ChaCha8Rng, on: (f64, f64), off: (f64, f64)) -> Vec<f64> {
    let mut gate = vec![0.0; n];
    let duration = n as f64 / fs;
    let mut t = rng.gen_range(0.0..off.1);
    while t < duration {
        let len = rng.gen_range(on.0..on.1);
        let a = (t * fs) as usize;
        let b = (((t + len) * fs) as usize).min(n);
        let fade = ((0.01 * fs) as usize).max(1).min((b - a.min(b)) / 2 + 1);
        for i in a..b {
            let from_start = i - a;
            let to_end = b - 1 - i;
            let edge = from_start.min(to_end) as f64 / fade as f64;
            gate[i] = if edge >= 1.0 {
                1.0
            } else {
                0.5 - 0.5 * (PI * edge).cos()
            };
        }
        t += len + rng.gen_range(off.0..off.1);
    }
    gate
}

fn harmonic_tone(
    n: usize,
    fs: f64,
    f0: &dyn Fn(f64) -> f64,
    max_hz: f64,
    weight: &dyn Fn(f64, usize) -> f64,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    // integrates the instantaneous fundamental so gliding pitch stays continuous
    let mut out = vec![0.0; n];
    let mut phase = 0.0;
    let harmonics = 40;
    let offsets: Vec<f64> = (0..harmonics).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    for (i, o) in out.iter_mut().enumerate() {
        let t = i as f64 / fs;
        let f = f0(t);
        phase += 2.0 * PI * f / fs;
        for h in 1..=harmonics {
            let fh = f * h as f64;
            if fh > max_hz {
                break;
            }
            *o += weight(fh, h) * (h as f64 * phase + offsets[h - 1]).sin();
        }
    }
    out
}

fn hammering(n: usize, fs: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut out = vec![0.0; n];
    let duration = n as f64 / fs;
    let gaps = Exp::new(3.0).unwrap();
    // first strike early so even short windows contain one
    let mut t = rng.gen_range(0.0..0.2f64.min(0.5 * duration));
    while t < duration {
        let amp = rng.gen_range(0.5..1.5);
        let ring_hz = rng.gen_range(1500.0..6000.0);
        add_damped_ring(&mut out, fs, t, amp, ring_hz, 0.015);
        let first = (t * fs) as usize;
        for i in first..(first + (0.02 * fs) as usize).min(n) {
            let tau = (i - first) as f64 / fs;
            let w: f64 = rng.sample(StandardNormal);
            out[i] += 1.5 * amp * w * (-tau / 0.003).exp();
        }
        t += gaps.sample(rng);
    }
    out
}

fn contamination(kind: NoiseKind, n: usize, fs: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match kind {
        NoiseKind::None => vec![0.0; n],
        NoiseKind::Hammering => hammering(n, fs, rng),
        NoiseKind::AirPressure => shaped_noise(n, fs, rng, |f| band_gain(f, 3000.0, 16000.0)),
        NoiseKind::Ventilation => {
            let mut x = shaped_noise(n, fs, rng, |f| if !(20.0..=500.0).contains(&f) { 0.0 } else { 1.0 });
            let blade = rng.gen_range(40.0..80.0);
            for (i, v) in x.iter_mut().enumerate() {
                *v += 0.7 * (2.0 * PI * blade * i as f64 / fs).sin();
            }
            x
        }
        NoiseKind::ElectricWrench => {
            let f0 = rng.gen_range(300.0..700.0);
            let am_hz = rng.gen_range(20.0..40.0);
            let tone = harmonic_tone(n, fs, &|_| f0, 6.0 * f0 + 1.0, &|_, h| 1.0 / h as f64, rng);
            let gate = burst_gate(n, fs, rng, (0.3, 0.8), (0.2, 0.6));
            tone.iter()
                .zip(&gate)
                .enumerate()
                .map(|(i, (x, g))| {
                    let am = (1.0 + 0.8 * (2.0 * PI * am_hz * i as f64 / fs).cos()) / 1.8;
                    x * g * am
                })
                .collect()
        }
        NoiseKind::Speech => {
            let base_f0 = rng.gen_range(100.0..220.0);
            let f1 = rng.gen_range(300.0..800.0);
            let f2 = rng.gen_range(900.0..2500.0);
            let formant = move |f: f64, _h: usize| {
                let bump = |c: f64, w: f64| (-(f - c).powi(2) / (2.0 * w * w)).exp();
                0.05 + bump(f1, 150.0) + 0.6 * bump(f2, 250.0)
            };
            let glide = move |t: f64| base_f0 * (1.0 + 0.1 * (2.0 * PI * 0.7 * t).sin());
            let voiced = harmonic_tone(n, fs, &glide, 4000.0, &formant, rng);
            let gate = burst_gate(n, fs, rng, (0.15, 0.3), (0.05, 0.2));
            voiced.iter().zip(&gate).map(|(x, g)| x * g).collect()
        }
        NoiseKind::Music => {
            const SCALE: [f64; 8] = [196.0, 220.0, 261.6, 293.7, 329.6, 392.0, 440.0, 523.3];
            let mut out = vec![0.0; n];
            let duration = n as f64 / fs;
            let mut t = 0.0;
            while t < duration {
                let len = rng.gen_range(0.25..0.6);
                let a = (t * fs) as usize;
                let b = (((t + len) * fs) as usize).min(n);
                for _ in 0..rng.gen_range(1..=3) {
                    let f0 = SCALE[rng.gen_range(0..SCALE.len())] * [1.0, 2.0][rng.gen_range(0..2)];
                    let phase = rng.gen_range(0.0..2.0 * PI);
                    for i in a..b {
                        let tau = (i - a) as f64 / fs;
                        let env = (1.0 - (-tau / 0.01).exp()) * (-tau / 0.4).exp();
                        let mut s = 0.0;
                        let mut h = 1.0;
                        while f0 * h <= 4000.0 {
                            s += (2.0 * PI * f0 * h * tau + phase * h).sin() / h.powf(1.2);
                            h += 1.0;
                        }
                        out[i] += env * s;
                    }
                }
                t += len;
            }
            out
        }
    }
}

// Sample range of the noise window plus a raised-cosine fade over it.
fn window_span(n: usize, fs: f64, window: Option<(f64, f64)>) -> (usize, Vec<f64>) {
    let (a, b) = match window {
        Some((start, end)) => ((start * fs).round() as usize, ((end * fs).round() as usize).min(n)),
        None => return (0, vec![1.0; n]),
    };
    let fade = ((0.01 * fs) as usize).max(1);
    let len = b.saturating_sub(a);
    let gate = (0..len)
        .map(|i| {
            let edge = (i.min(len - 1 - i) as f64 / fade as f64).min(1.0);
            0.5 - 0.5 * (PI * edge).cos()
        })
        .collect();
    (a, gate)
}

/// Synthesizes one recording; a pure function of its arguments.
pub fn synthesize_motor_sound(
    spec: &SyntheticMotorSpec,
    noise: &NoiseSpec,
    duration_s: f64,
    sample_rate_hz: f64,
    seed: u64,
) -> Result<TimeSignal> {
    spec.validate()?;
    if !(duration_s > 0.0 && duration_s.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "duration must be positive, got {duration_s}"
        )));
    }
    if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "sample rate must be positive, got {sample_rate_hz}"
        )));
    }
    noise.validate(duration_s)?;
    let n = (duration_s * sample_rate_hz).round() as usize;
    if n < 2 {
        return Err(Error::InvalidSpec("duration yields fewer than two samples".into()));
    }
    let fs = sample_rate_hz;

    let mut x = motor_base(spec, n, fs, &mut stream(seed, STREAM_BASE));
    let base_rms = REFERENCE_PRESSURE_PA * 10f64.powf(spec.base_spl_db / 20.0);
    let impulses = fault_impulses(spec, base_rms, n, fs, &mut stream(seed, STREAM_FAULT));
    x.iter_mut().zip(&impulses).for_each(|(a, b)| *a += b);

    if noise.kind != NoiseKind::None {
        let (offset, gate) = window_span(n, fs, noise.window_s);
        if gate.len() >= 2 {
            let mut contam = contamination(noise.kind, gate.len(), fs, &mut stream(seed, STREAM_NOISE));
            contam.iter_mut().zip(&gate).for_each(|(c, g)| *c *= g);
            let r = rms(&contam);
            if r > 0.0 {
                let g = base_rms * 10f64.powf(noise.level_db_rel / 20.0) / r;
                x[offset..offset + contam.len()]
                    .iter_mut()
                    .zip(&contam)
                    .for_each(|(a, c)| *a += g * c);
            }
        }
    }
    TimeSignal::new(x, fs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::magnitude_spectrum;
    use crate::envelope::{envelope_spectrum, EnvelopeKind};

    fn spec(health: Health) -> SyntheticMotorSpec {
        SyntheticMotorSpec::new(GearGeometry::reference(), health)
    }

    #[test]
    fn deterministic_for_fixed_arguments() {
        let s = spec(Health::MajorFault);
        let noise = NoiseSpec::new(NoiseKind::Hammering, 3.0);
        let a = synthesize_motor_sound(&s, &noise, 0.5, 48000.0, 7).unwrap();
        let b = synthesize_motor_sound(&s, &noise, 0.5, 48000.0, 7).unwrap();
        assert_eq!(a, b);
        let c = synthesize_motor_sound(&s, &noise, 0.5, 48000.0, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn base_level_matches_spl() {
        let s = spec(Health::Healthy);
        let mut quiet = s.clone();
        quiet.include_inverter_tone = false;
        let x = synthesize_motor_sound(&quiet, &NoiseSpec::none(), 1.0, 48000.0, 1).unwrap();
        let spl = 20.0 * (x.rms() / REFERENCE_PRESSURE_PA).log10();
        assert!((spl - 70.0).abs() < 1e-9, "{spl}");
    }

    #[test]
    fn resonance_and_gain_are_validated() {
        let mut s = spec(Health::MajorFault);
        s.resonance_hz = 6000.0;
        assert!(matches!(
            synthesize_motor_sound(&s, &NoiseSpec::none(), 1.0, 48000.0, 0),
            Err(Error::InvalidSpec(_))
        ));
        let mut s = spec(Health::Healthy);
        s.impulse_gain = 1.0;
        assert!(s.validate().is_err());
        let mut s = spec(Health::MinorFault);
        s.impulse_gain = 0.0;
        assert!(s.validate().is_err());
        let noise = NoiseSpec {
            kind: NoiseKind::Speech,
            level_db_rel: 0.0,
            window_s: Some((0.5, 1.5)),
        };
        assert!(synthesize_motor_sound(&spec(Health::Healthy), &noise, 1.0, 48000.0, 0).is_err());
    }

    #[test]
    fn major_fault_shows_in_log_envelope() {
        let s = spec(Health::MajorFault);
        let x = synthesize_motor_sound(&s, &NoiseSpec::none(), 5.0, 48000.0, 42).unwrap();
        let les = envelope_spectrum(&x, EnvelopeKind::Les, 1150.0, 5100.0).unwrap();
        let ff = s.fault_frequency_hz();
        assert!((ff - 22.916_666).abs() < 1e-4);
        let k = les.nearest_bin(ff);
        let peak = les.magnitudes[k - 1..=k + 1].iter().cloned().fold(0.0, f64::max);
        let mut sorted = les.magnitudes[1..].to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        let db = 10.0 * (peak / median).log10();
        assert!(db >= 10.0, "peak only {db:.1} dB above median");
    }

    fn energy_below(x: &TimeSignal, hz: f64) -> f64 {
        let s = magnitude_spectrum(x.samples(), x.sample_rate_hz());
        s.frequencies_hz
            .iter()
            .zip(&s.magnitudes)
            .filter(|(f, _)| **f > 0.0 && **f < hz)
            .map(|(_, m)| m * m)
            .sum()
    }

    #[test]
    fn ventilation_adds_low_frequency_energy() {
        let s = spec(Health::Healthy);
        let clean = synthesize_motor_sound(&s, &NoiseSpec::none(), 1.0, 48000.0, 3).unwrap();
        let vent = synthesize_motor_sound(&s, &NoiseSpec::new(NoiseKind::Ventilation, 0.0), 1.0, 48000.0, 3).unwrap();
        assert!(energy_below(&vent, 500.0) > energy_below(&clean, 500.0));
    }

    #[test]
    fn every_noise_kind_respects_its_window() {
        let s = spec(Health::Healthy);
        let clean = synthesize_motor_sound(&s, &NoiseSpec::none(), 1.0, 48000.0, 5).unwrap();
        for kind in NoiseKind::CONTAMINANTS {
            let noise = NoiseSpec {
                kind,
                level_db_rel: 6.0,
                window_s: Some((0.5, 1.0)),
            };
            let x = synthesize_motor_sound(&s, &noise, 1.0, 48000.0, 5).unwrap();
            assert_eq!(&x.samples()[..24000], &clean.samples()[..24000], "{kind:?}");
            let diff: Vec<f64> = x.samples()[24000..]
                .iter()
                .zip(&clean.samples()[24000..])
                .map(|(a, b)| a - b)
                .collect();
            let rel = rms(&diff) / clean.rms();
            assert!(rel > 1.0, "{kind:?}: {rel}");
        }
    }
}
