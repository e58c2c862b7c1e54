//! Evaluation: ROC/AUC, the train/test benchmark protocol, Kendall's W for
//! rater agreement and majority voting of labels.

mod benchmark;
mod kendall;
mod roc;

pub use benchmark::{benchmark_run, score_test_split, BenchmarkReport, BenchmarkRow, Positives, SplitScores};
pub use kendall::{kendalls_w, mid_ranks};
pub use roc::{auc, roc_curve, RocCurve, RocPoint};

use crate::signal::Health;

/// Combines three ordinal votes: a strict majority wins, and a three-way
/// split goes to the middle severity. Both rules amount to the median.
pub fn aggregate_labels(votes: [Health; 3]) -> Health {
    let mut v = votes;
    v.sort_by_key(|h| h.severity());
    v[1]
}
