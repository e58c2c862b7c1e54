//! Calibration anchors, modulation tuning curves and series properties of the
//! psychoacoustic models.

use std::f64::consts::PI;

use gearsound::psycho::{
    highpass_loudness, stationary_loudness, timevarying_fluctuation, timevarying_loudness, timevarying_roughness,
    tvpa_features, LoudnessSeries,
};
use gearsound::signal::REFERENCE_PRESSURE_PA;
use gearsound::TimeSignal;
use proptest::prelude::*;

const FS: f64 = 48000.0;

fn am_tone(level_db: f64, fm: f64, depth: f64, secs: f64) -> TimeSignal {
    let peak = REFERENCE_PRESSURE_PA * 10f64.powf(level_db / 20.0) * 2f64.sqrt();
    let n = (secs * FS) as usize;
    let x = (0..n)
        .map(|i| {
            let t = i as f64 / FS;
            peak * (1.0 + depth * (2.0 * PI * fm * t).cos()) * (2.0 * PI * 1000.0 * t).sin()
        })
        .collect();
    TimeSignal::new(x, FS).unwrap()
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn roughness(fm: f64) -> f64 {
    mean(&timevarying_roughness(&am_tone(60.0, fm, 1.0, 1.0)).unwrap().values)
}

fn fluctuation(fm: f64) -> f64 {
    mean(&timevarying_fluctuation(&am_tone(60.0, fm, 1.0, 4.0)).unwrap().values)
}

#[test]
fn loudness_anchor_and_doubling() {
    let n40 = stationary_loudness(&am_tone(40.0, 1.0, 0.0, 1.0)).unwrap().total_sone;
    let n50 = stationary_loudness(&am_tone(50.0, 1.0, 0.0, 1.0)).unwrap().total_sone;
    assert!((n40 - 1.0).abs() <= 0.1, "{n40}");
    assert!((n50 / n40 - 2.0).abs() <= 0.2, "{}", n50 / n40);
}

#[test]
fn roughness_anchor_and_tuning() {
    let r70 = roughness(70.0);
    assert!((r70 - 1.0).abs() <= 0.25, "{r70}");
    assert!(r70 > roughness(30.0));
    assert!(r70 > roughness(200.0));
    let flat = mean(&timevarying_roughness(&am_tone(60.0, 70.0, 0.0, 1.0)).unwrap().values);
    assert!(flat < 0.05, "{flat}");
}

#[test]
fn fluctuation_anchor_and_tuning() {
    let f4 = fluctuation(4.0);
    assert!((f4 - 1.0).abs() <= 0.3, "{f4}");
    assert!(f4 > fluctuation(1.0));
    assert!(f4 > fluctuation(16.0));
    assert!(fluctuation(70.0) < 0.2 * f4);
    let flat = mean(&timevarying_fluctuation(&am_tone(60.0, 4.0, 0.0, 4.0)).unwrap().values);
    assert!(flat < 0.05, "{flat}");
}

#[test]
fn steady_tone_loudness_settles_on_the_stationary_value() {
    let s = am_tone(40.0, 1.0, 0.0, 2.0);
    let stationary = stationary_loudness(&s).unwrap().total_sone;
    let series = timevarying_loudness(&s).unwrap();
    assert_eq!(series.len(), 1000);
    for v in &series.values[250..] {
        assert!((v - stationary).abs() <= 0.15 * stationary, "{v} vs {stationary}");
    }
    let silence = TimeSignal::new(vec![0.0; 9600], FS).unwrap();
    assert!(timevarying_loudness(&silence).unwrap().values.iter().all(|&v| v < 0.01));
}

#[test]
fn frame_counts_for_five_seconds() {
    let s = am_tone(50.0, 1.0, 0.0, 5.0);
    assert_eq!(timevarying_loudness(&s).unwrap().len(), 2500);
    assert_eq!(timevarying_roughness(&s).unwrap().len(), 25);
    assert_eq!(timevarying_fluctuation(&s).unwrap().len(), 2500);
}

/// Amplitude of the `f` Hz component of `x` at 500 Hz, by projection over
/// the interior so the filter's edge transients are ignored.
fn component(x: &[f64], f: f64) -> f64 {
    let skip = 500;
    let (mut c, mut s) = (0.0, 0.0);
    let body = &x[skip..x.len() - skip];
    for (i, v) in body.iter().enumerate() {
        let t = (i + skip) as f64 / 500.0;
        c += v * (2.0 * PI * f * t).cos();
        s += v * (2.0 * PI * f * t).sin();
    }
    2.0 * (c * c + s * s).sqrt() / body.len() as f64
}

#[test]
fn loudness_highpass_response() {
    let series = |f: f64| {
        LoudnessSeries::new(
            (0..5000)
                .map(|i| 3.0 + (2.0 * PI * f * i as f64 / 500.0).sin())
                .collect(),
        )
    };
    let low = highpass_loudness(&series(2.0)).unwrap();
    assert!(20.0 * component(&low.values, 2.0).log10() <= -40.0);
    assert!((mean(&low.values) - 3.0).abs() < 1e-9);
    let high = highpass_loudness(&series(50.0)).unwrap();
    assert!((component(&high.values, 50.0) - 1.0).abs() <= 0.05);
}

#[test]
fn burst_raises_the_loudness_impulse_factor() {
    let quiet = am_tone(40.0, 1.0, 0.0, 5.0);
    let mut x = quiet.samples().to_vec();
    let start = (2.5 * FS) as usize;
    for v in &mut x[start..start + (0.02 * FS) as usize] {
        *v *= 30.0;
    }
    let burst = TimeSignal::new(x, FS).unwrap();
    let a = tvpa_features(&quiet).unwrap().values()[0];
    let b = tvpa_features(&burst).unwrap().values()[0];
    assert!(b > a, "{b} vs {a}");
    assert!(tvpa_features(&quiet).unwrap().values()[1] < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn loudness_grows_with_gain(gain in 0.05f64..20.0) {
        let s = am_tone(55.0, 8.0, 0.5, 0.5);
        let base = stationary_loudness(&s).unwrap().total_sone;
        let scaled = stationary_loudness(&s.scaled(gain).unwrap()).unwrap().total_sone;
        if gain >= 1.0 {
            prop_assert!(scaled >= base);
        } else {
            prop_assert!(scaled <= base);
        }
    }
}
