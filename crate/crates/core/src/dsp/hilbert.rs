use rustfft::num_complex::Complex64;

use super::fft::{forward_real, inverse_in_place};

/// Analytic signal `x + j·H{x}` by the frequency-domain construction: DC kept,
/// positive frequencies doubled, negative frequencies zeroed. For even lengths
/// the Nyquist bin is kept with weight one.
pub fn analytic_signal(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let mut spec = forward_real(x);
    let half = n / 2;
    let last_doubled = if n.is_multiple_of(2) { half - 1 } else { half };
    for (k, c) in spec.iter_mut().enumerate().skip(1) {
        if k <= last_doubled {
            *c *= 2.0;
        } else if !(n.is_multiple_of(2) && k == half) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    inverse_in_place(&mut spec);
    let scale = 1.0 / n as f64;
    spec.iter_mut().for_each(|c| *c *= scale);
    spec
}

/// Instantaneous amplitude `|x + j·H{x}|`.
pub fn analytic_envelope(x: &[f64]) -> Vec<f64> {
    analytic_signal(x).iter().map(|c| c.norm()).collect()
}
