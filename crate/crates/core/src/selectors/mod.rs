//! Per-feature relevance scoring and top-k column selection.

mod chi2;
mod mi;
mod nca;

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

pub use chi2::chi2_scores;
pub use mi::{mi_from_joint, mi_scores, quantile_bins, MiConfig};
pub use nca::{nca_fit, nca_gradient, nca_objective, nca_optimize, NcaConfig, NcaFit};

use crate::dataset::FeatureMask;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ScoreMethod {
    Chi2,
    Mi,
    Nca,
}

impl ScoreMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreMethod::Chi2 => "chi2",
            ScoreMethod::Mi => "mi",
            ScoreMethod::Nca => "nca",
        }
    }
}

/// One relevance value per feature column; larger means more relevant.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureScores {
    pub scores: Vec<f64>,
    pub method: ScoreMethod,
}

/// Indices of the `k` highest scores, ascending. Equal scores prefer the lower column.
pub fn select_top_k(scores: &FeatureScores, k: usize) -> Result<FeatureMask> {
    let p = scores.scores.len();
    if k == 0 || k > p {
        return Err(Error::Argument(format!("k={k} must lie in 1..={p}")));
    }
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| {
        scores.scores[b]
            .partial_cmp(&scores.scores[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order.truncate(k);
    order.sort_unstable();
    FeatureMask::new(order, p)
}

/// Number of classes implied by `labels` (max id + 1), requiring at least two distinct ids.
pub(crate) fn class_count(labels: &[usize]) -> Result<usize> {
    let c = labels.iter().max().map_or(0, |&m| m + 1);
    let mut seen = alloc::vec![false; c];
    labels.iter().for_each(|&l| seen[l] = true);
    if seen.iter().filter(|&&s| s).count() < 2 {
        return Err(Error::Degenerate("at least two classes are required".into()));
    }
    Ok(c)
}

pub(crate) fn check_rows(rows: usize, labels: &[usize]) -> Result<()> {
    if rows != labels.len() {
        return Err(Error::Argument(format!("{} rows but {} labels", rows, labels.len())));
    }
    Ok(())
}
