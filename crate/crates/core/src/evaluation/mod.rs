//! Stratified cross-validation, metrics and the selector × k × classifier grid.

mod folds;
mod grid;
mod metrics;
mod pipeline;

use core::fmt;
use core::str::FromStr;

pub use folds::{make_stratified_folds, FoldPlan};
pub use grid::{
    grid_cells, run_experiment_grid, run_experiment_grid_with, ExperimentReport, FoldTag,
    GridCache, GridCell, GridConfig, MetricRow, NoCache,
};
pub use metrics::{compute_metrics, confusion_matrix, Averaging, ConfusionMatrix, Metrics};
pub use pipeline::{
    evaluate_with_mask, fold_mask, fold_scores, prepare_fold, run_pipeline_fold, PipelineSettings,
    PreparedFold,
};

use crate::error::{Error, Result};
use crate::selectors::ScoreMethod;

/// Feature selector applied inside each fold; `None` keeps every column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum SelectorKind {
    None,
    Chi2,
    Mi,
    Nca,
}

impl SelectorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SelectorKind::None => "none",
            SelectorKind::Chi2 => "chi2",
            SelectorKind::Mi => "mi",
            SelectorKind::Nca => "nca",
        }
    }

    pub fn method(self) -> Option<ScoreMethod> {
        match self {
            SelectorKind::None => None,
            SelectorKind::Chi2 => Some(ScoreMethod::Chi2),
            SelectorKind::Mi => Some(ScoreMethod::Mi),
            SelectorKind::Nca => Some(ScoreMethod::Nca),
        }
    }
}

impl fmt::Display for SelectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SelectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SelectorKind::None),
            "chi2" => Ok(SelectorKind::Chi2),
            "mi" => Ok(SelectorKind::Mi),
            "nca" => Ok(SelectorKind::Nca),
            _ => Err(Error::Argument(alloc::format!("unknown selector {s:?}"))),
        }
    }
}
