//! Signal extension by linear prediction.

use std::f64::consts::PI;

/// Prediction coefficients `a[1..=order]` of an autoregressive model fitted
/// with Burg's method, so that `x[n] ≈ -Σ a[i]·x[n-i]`. Stops early when the
/// residual vanishes.
pub fn burg(x: &[f64], order: usize) -> Vec<f64> {
    let n = x.len();
    let order = order.min(n.saturating_sub(1));
    let mut a = vec![1.0];
    let mut f = x.to_vec();
    let mut b = x.to_vec();
    let energy: f64 = x.iter().map(|v| v * v).sum();
    for m in 0..order {
        let (mut num, mut den) = (0.0, 0.0);
        for i in m + 1..n {
            num += f[i] * b[i - 1];
            den += f[i] * f[i] + b[i - 1] * b[i - 1];
        }
        if den <= 1e-24 * energy || den == 0.0 {
            break;
        }
        let k = -2.0 * num / den;
        for i in (m + 1..n).rev() {
            let (fi, bi) = (f[i], b[i - 1]);
            f[i] = fi + k * bi;
            b[i] = bi + k * fi;
        }
        let prev = a.clone();
        a.push(0.0);
        for i in 1..a.len() {
            a[i] += k * prev[prev.len() - i];
        }
    }
    a.split_off(1)
}

/// `count` samples continuing `x` forward, predicted from an order-`order`
/// model fitted to the last `fit_len` samples and faded to zero by a
/// half-cosine.
fn continuation(x: &[f64], count: usize, order: usize, fit_len: usize) -> Vec<f64> {
    let tail = &x[x.len() - fit_len.min(x.len())..];
    let a = burg(tail, order);
    let mut hist = tail.to_vec();
    for _ in 0..count {
        let m = hist.len();
        let next = -a.iter().enumerate().map(|(i, c)| c * hist[m - 1 - i]).sum::<f64>();
        hist.push(next);
    }
    hist[tail.len()..]
        .iter()
        .enumerate()
        .map(|(k, v)| v * 0.5 * (1.0 + (PI * (k + 1) as f64 / (count + 1) as f64).cos()))
        .collect()
}

/// `x` with `pad` predicted samples before and after it.
pub fn extend_by_prediction(x: &[f64], pad: usize, order: usize, fit_len: usize) -> Vec<f64> {
    let reversed: Vec<f64> = x.iter().rev().copied().collect();
    let mut out: Vec<f64> = continuation(&reversed, pad, order, fit_len).into_iter().rev().collect();
    out.extend_from_slice(x);
    out.extend(continuation(x, pad, order, fit_len));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sine_is_continued_exactly_before_the_fade() {
        let w = 2.0 * PI * 0.013;
        let x: Vec<f64> = (0..2000).map(|i| (w * i as f64 + 0.4).sin()).collect();
        let y = extend_by_prediction(&x, 400, 16, 1000);
        assert_eq!(y.len(), 2800);
        for k in 0..20 {
            let fade = 0.5 * (1.0 + (PI * (k + 1) as f64 / 401.0).cos());
            let after = (w * (2000 + k) as f64 + 0.4).sin() * fade;
            let before = (w * (-1 - k as i64) as f64 + 0.4).sin() * fade;
            assert!((y[2400 + k] - after).abs() < 1e-6, "{k}");
            assert!((y[399 - k] - before).abs() < 1e-6, "{k}");
        }
    }

    #[test]
    fn noise_continuation_stays_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x: Vec<f64> = (0..4000).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y = extend_by_prediction(&x, 2000, 32, 2000);
        assert!(y.iter().all(|v| v.abs() < 5.0));
        assert!(y[0].abs() < 1e-3 && y[y.len() - 1].abs() < 1e-3);
    }

    #[test]
    fn short_or_silent_input() {
        assert!(burg(&[0.0; 50], 8).is_empty());
        let y = extend_by_prediction(&[0.0; 10], 5, 4, 10);
        assert!(y.iter().all(|&v| v == 0.0));
    }
}
