use std::io::Write;

use crate::error::{Error, Result};

/// One ROC vertex: the rates obtained by flagging every score `>= threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    pub threshold: f64,
}

/// ROC curve from threshold `+∞` (point `(0, 0)`) down to the lowest score
/// (point `(1, 1)`), one vertex per distinct score.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
}

/// ROC of fault scores (higher = more suspicious) against labels
/// (`true` = positive). Equal scores form a single step.
pub fn roc_curve(scores: &[f64], labels: &[bool]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: scores.len(),
        });
    }
    if let Some(s) = scores.iter().find(|s| s.is_nan()) {
        return Err(Error::DegenerateInput(format!("score {s} is not a number")));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClassInput);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: f64::INFINITY,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        while i < order.len() && scores[order[i]] == threshold {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / negatives as f64,
            tpr: tp as f64 / positives as f64,
            threshold,
        });
    }
    Ok(RocCurve { points })
}

/// Trapezoidal area under the curve.
pub fn auc(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0)
        .sum()
}

impl RocCurve {
    /// CSV with header `fpr,tpr,threshold`; the first row's threshold is `inf`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let fail = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["fpr", "tpr", "threshold"]).map_err(fail)?;
        for p in &self.points {
            w.write_record([p.fpr.to_string(), p.tpr.to_string(), p.threshold.to_string()])
                .map_err(fail)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_separation() {
        let c = roc_curve(&[0.1, 0.2, 0.8, 0.9], &[false, false, true, true]).unwrap();
        assert!(c.points.iter().any(|p| p.fpr == 0.0 && p.tpr == 1.0));
        assert_eq!(auc(&c), 1.0);
    }

    #[test]
    fn identical_scores_form_one_step() {
        let c = roc_curve(&[0.5; 6], &[true, false, true, false, false, true]).unwrap();
        assert_eq!(c.points.len(), 2);
        assert_eq!((c.points[1].fpr, c.points[1].tpr), (1.0, 1.0));
        assert_eq!(auc(&c), 0.5);
    }

    #[test]
    fn hand_case() {
        let c = roc_curve(&[0.1, 0.4, 0.35, 0.8], &[false, false, true, true]).unwrap();
        assert_eq!(auc(&c), 0.75);
    }

    #[test]
    fn single_class_is_rejected() {
        assert!(matches!(
            roc_curve(&[0.1, 0.2], &[true, true]),
            Err(Error::SingleClassInput)
        ));
        assert!(roc_curve(&[0.1], &[true, false]).is_err());
    }

    #[test]
    fn csv_layout() {
        let c = roc_curve(&[0.2, 0.7], &[false, true]).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "fpr,tpr,threshold\n0,0,inf\n0,1,0.7\n1,1,0.2\n");
    }
}
