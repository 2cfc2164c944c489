use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{check_rows, class_count, FeatureScores, ScoreMethod};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Discretisation used to turn a continuous column into bins before
/// computing plug-in mutual information with the class label.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MiConfig {
    /// Target number of quantile bins; fewer survive when edges coincide.
    pub bins: usize,
}

impl Default for MiConfig {
    fn default() -> Self {
        Self { bins: 16 }
    }
}

/// Bin index of every value using `bins − 1` interior quantile edges.
///
/// Edges are linear-interpolated quantiles of the column at `b / bins`;
/// duplicate edges are collapsed, and a value falls in bin `t` where `t`
/// counts the edges strictly below it.
pub fn quantile_bins(column: &[f64], bins: usize) -> Vec<usize> {
    let mut sorted = column.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut edges: Vec<f64> = Vec::with_capacity(bins.saturating_sub(1));
    if n > 0 {
        for b in 1..bins {
            let h = (n - 1) as f64 * b as f64 / bins as f64;
            let lo = h as usize;
            let hi = (lo + 1).min(n - 1);
            let e = sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]);
            if edges.last() != Some(&e) {
                edges.push(e);
            }
        }
    }
    column.iter().map(|&v| edges.partition_point(|&e| e < v)).collect()
}

/// Plug-in mutual information (natural log) of a joint count table
/// `joint[a][b]`, with `0 · ln 0 = 0`.
pub fn mi_from_joint(joint: &[Vec<u64>]) -> f64 {
    let total: u64 = joint.iter().flatten().sum();
    if total == 0 {
        return 0.0;
    }
    let cols = joint.iter().map(Vec::len).max().unwrap_or(0);
    let row_sum: Vec<u64> = joint.iter().map(|r| r.iter().sum()).collect();
    let mut col_sum = vec![0u64; cols];
    for r in joint {
        for (s, &v) in col_sum.iter_mut().zip(r) {
            *s += v;
        }
    }
    let n = total as f64;
    let mut mi = 0.0;
    for (r, &ra) in joint.iter().zip(&row_sum) {
        for (&nab, &cb) in r.iter().zip(&col_sum) {
            if nab == 0 {
                continue;
            }
            let nab = nab as f64;
            mi += nab / n * libm::log(n * nab / (ra as f64 * cb as f64));
        }
    }
    // a KL divergence; negative values are rounding noise
    mi.max(0.0)
}

/// Mutual information between each quantile-binned feature and the class label.
pub fn mi_scores(x: &Matrix, labels: &[usize], config: &MiConfig) -> Result<FeatureScores> {
    check_rows(x.rows(), labels)?;
    if config.bins < 2 {
        return Err(Error::Argument(format!("bins must be >= 2, got {}", config.bins)));
    }
    let c = class_count(labels)?;
    let scores = (0..x.cols())
        .map(|j| {
            let bins = quantile_bins(&x.column(j), config.bins);
            let nb = bins.iter().max().map_or(0, |&m| m + 1);
            let mut joint = vec![vec![0u64; c]; nb];
            for (&b, &y) in bins.iter().zip(labels) {
                joint[b][y] += 1;
            }
            mi_from_joint(&joint)
        })
        .collect();
    Ok(FeatureScores { scores, method: ScoreMethod::Mi })
}
