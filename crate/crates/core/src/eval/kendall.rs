use crate::error::{Error, Result};

/// Mid-ranks (1-based) of `values`; ties share the mean of their positions.
pub fn mid_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Kendall's coefficient of concordance with the tie correction.
///
/// `ratings[r][i]` is rater `r`'s ordinal judgement of item `i`; any
/// ordered scale works since each row is converted to mid-ranks.
pub fn kendalls_w(ratings: &[Vec<f64>]) -> Result<f64> {
    let m = ratings.len();
    let n = ratings.first().map_or(0, Vec::len);
    if m < 2 || n < 2 {
        return Err(Error::DegenerateInput(format!(
            "need at least 2 raters and 2 items, got {m} x {n}"
        )));
    }
    if let Some(row) = ratings.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: row.len(),
        });
    }
    let mut rank_sums = vec![0.0; n];
    let mut tie_total = 0.0;
    for row in ratings {
        let ranks = mid_ranks(row);
        for (s, r) in rank_sums.iter_mut().zip(&ranks) {
            *s += r;
        }
        let mut sorted = ranks;
        sorted.sort_by(f64::total_cmp);
        for group in sorted.chunk_by(|a, b| a == b) {
            let t = group.len() as f64;
            tie_total += t * t * t - t;
        }
    }
    let (mf, nf) = (m as f64, n as f64);
    let mean = mf * (nf + 1.0) / 2.0;
    let s: f64 = rank_sums.iter().map(|r| (r - mean).powi(2)).sum();
    let denominator = mf * mf * (nf * nf * nf - nf) - mf * tie_total;
    if denominator <= 0.0 {
        return Err(Error::DegenerateInput("every rater ties every item".into()));
    }
    Ok(12.0 * s / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mid_ranks_of_ties() {
        assert_eq!(mid_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn identical_and_reversed() {
        let a = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(kendalls_w(&[a.clone(), a.clone(), a.clone()]).unwrap(), 1.0);
        let b: Vec<f64> = a.iter().rev().cloned().collect();
        assert_eq!(kendalls_w(&[a, b]).unwrap(), 0.0);
    }

    #[test]
    fn all_tied_is_degenerate() {
        let r = vec![1.0; 4];
        assert!(matches!(kendalls_w(&[r.clone(), r]), Err(Error::DegenerateInput(_))));
        assert!(kendalls_w(&[vec![1.0, 2.0]]).is_err());
    }
}
