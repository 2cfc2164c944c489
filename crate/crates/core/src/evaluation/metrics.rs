//! Confusion matrices and support-weighted classification metrics.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// `counts[t][p]`: rows of true class `t` predicted as `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionMatrix {
    n_classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn zeros(n_classes: usize) -> Self {
        Self { n_classes, counts: vec![0; n_classes * n_classes] }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let c = rows.len();
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::Argument("confusion matrix must be square".into()));
        }
        Ok(Self { n_classes: c, counts: rows.concat() })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.n_classes + predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes).map(|c| self.get(c, c)).sum()
    }

    /// `(tp, fp, fn)` of class `c` against all others.
    pub fn one_vs_rest(&self, c: usize) -> (u64, u64, u64) {
        let tp = self.get(c, c);
        let col: u64 = (0..self.n_classes).map(|t| self.get(t, c)).sum();
        let row: u64 = (0..self.n_classes).map(|p| self.get(c, p)).sum();
        (tp, col - tp, row - tp)
    }
}

pub fn confusion_matrix(
    truth: &[usize],
    predicted: &[usize],
    n_classes: usize,
) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::Argument(format!(
            "{} true labels but {} predictions",
            truth.len(),
            predicted.len()
        )));
    }
    let mut cm = ConfusionMatrix::zeros(n_classes);
    for (&t, &p) in truth.iter().zip(predicted) {
        if t >= n_classes || p >= n_classes {
            return Err(Error::Argument(format!("label {} outside 0..{n_classes}", t.max(p))));
        }
        cm.counts[t * n_classes + p] += 1;
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Averaging {
    /// Per-class values weighted by true-class support.
    #[default]
    Weighted,
    /// Unweighted mean over classes that occur in the truth or the predictions.
    Macro,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Metrics {
    pub fn mean(items: &[Metrics]) -> Metrics {
        let n = items.len() as f64;
        let sum = |f: fn(&Metrics) -> f64| items.iter().map(f).sum::<f64>() / n;
        Metrics {
            accuracy: sum(|m| m.accuracy),
            precision: sum(|m| m.precision),
            recall: sum(|m| m.recall),
            f1: sum(|m| m.f1),
        }
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Accuracy (trace / total) plus averaged per-class precision
/// `TP/(TP+FP)`, recall `TP/(TP+FN)` and F1 `2TP/(2TP+FP+FN)`.
pub fn compute_metrics(cm: &ConfusionMatrix, averaging: Averaging) -> Result<Metrics> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::Argument("confusion matrix is empty".into()));
    }
    let mut precision = 0.0;
    let mut recall = 0.0;
    let mut f1 = 0.0;
    let mut weight_sum = 0.0;
    for c in 0..cm.n_classes() {
        let (tp, fp, fn_) = cm.one_vs_rest(c);
        let support = tp + fn_;
        let w = match averaging {
            Averaging::Weighted => support as f64,
            Averaging::Macro => {
                if support + fp > 0 {
                    1.0
                } else {
                    0.0
                }
            }
        };
        if w == 0.0 {
            continue;
        }
        precision += w * ratio(tp, tp + fp);
        recall += w * ratio(tp, support);
        f1 += w * ratio(2 * tp, 2 * tp + fp + fn_);
        weight_sum += w;
    }
    Ok(Metrics {
        accuracy: cm.trace() as f64 / total as f64,
        precision: precision / weight_sum,
        recall: recall / weight_sum,
        f1: f1 / weight_sum,
    })
}
