//! One cross-validation fold: standardise, score, mask, fit, evaluate.
//!
//! Everything fitted here (standardiser, selector scores, mask, model) sees
//! only the training rows of the fold.

use alloc::format;
use alloc::vec::Vec;

use super::folds::FoldPlan;
use super::grid::{FoldTag, MetricRow};
use super::metrics::{compute_metrics, confusion_matrix, Averaging, ConfusionMatrix, Metrics};
use super::SelectorKind;
use crate::classifiers::{fit, predict, ClassifierConfig};
use crate::dataset::{EmbeddingDataset, FeatureMask};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::selectors::{chi2_scores, mi_scores, nca_fit, select_top_k, FeatureScores, MiConfig, NcaConfig};
use crate::standardize::Standardizer;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct PipelineSettings {
    pub mi: MiConfig,
    pub nca: NcaConfig,
    pub averaging: Averaging,
}

/// Train/test split of one fold with raw and standardised copies.
#[derive(Debug, Clone)]
pub struct PreparedFold {
    pub fold: usize,
    pub n_classes: usize,
    pub train_rows: Vec<usize>,
    pub test_rows: Vec<usize>,
    pub y_train: Vec<usize>,
    pub y_test: Vec<usize>,
    pub raw_train: Matrix,
    pub raw_test: Matrix,
    pub std_train: Matrix,
    pub std_test: Matrix,
    pub standardizer: Standardizer,
}

pub fn prepare_fold(dataset: &EmbeddingDataset, plan: &FoldPlan, fold: usize) -> Result<PreparedFold> {
    if fold >= plan.n_folds {
        return Err(Error::Argument(format!("fold {fold} outside 0..{}", plan.n_folds)));
    }
    if plan.fold_of.len() != dataset.n_rows() {
        return Err(Error::Argument("fold plan does not match dataset".into()));
    }
    let x = dataset.to_matrix();
    let labels = dataset.label_ids();
    let train_rows = plan.train_indices(fold);
    let test_rows = plan.test_indices(fold);
    let raw_train = x.select_rows(&train_rows);
    let raw_test = x.select_rows(&test_rows);
    let standardizer = Standardizer::fit(&raw_train);
    Ok(PreparedFold {
        fold,
        n_classes: dataset.n_classes(),
        y_train: train_rows.iter().map(|&i| labels[i]).collect(),
        y_test: test_rows.iter().map(|&i| labels[i]).collect(),
        std_train: standardizer.transform(&raw_train),
        std_test: standardizer.transform(&raw_test),
        raw_train,
        raw_test,
        standardizer,
        train_rows,
        test_rows,
    })
}

/// Training-split relevance scores; Chi² uses raw features, MI and NCA standardised ones.
pub fn fold_scores(
    prep: &PreparedFold,
    selector: SelectorKind,
    settings: &PipelineSettings,
) -> Result<Option<FeatureScores>> {
    Ok(match selector {
        SelectorKind::None => None,
        SelectorKind::Chi2 => Some(chi2_scores(&prep.raw_train, &prep.y_train)?),
        SelectorKind::Mi => Some(mi_scores(&prep.std_train, &prep.y_train, &settings.mi)?),
        SelectorKind::Nca => Some(nca_fit(&prep.std_train, &prep.y_train, &settings.nca)?),
    })
}

pub fn fold_mask(
    prep: &PreparedFold,
    selector: SelectorKind,
    k: Option<usize>,
    settings: &PipelineSettings,
) -> Result<FeatureMask> {
    let p = prep.raw_train.cols();
    match fold_scores(prep, selector, settings)? {
        None => Ok(FeatureMask::all(p)),
        Some(s) => select_top_k(&s, k.unwrap_or(p)),
    }
}

/// Fits `classifier` on the masked training split and scores the test split.
pub fn evaluate_with_mask(
    prep: &PreparedFold,
    mask: &FeatureMask,
    classifier: &ClassifierConfig,
    averaging: Averaging,
) -> Result<(ConfusionMatrix, Metrics)> {
    let (train, test) = if classifier.family.wants_standardized() {
        (&prep.std_train, &prep.std_test)
    } else {
        (&prep.raw_train, &prep.raw_test)
    };
    let cols = mask.indices();
    let model = fit(classifier, &train.select_cols(cols), &prep.y_train)?;
    let predicted = predict(&model, &test.select_cols(cols))?;
    let cm = confusion_matrix(&prep.y_test, &predicted, prep.n_classes)?;
    let metrics = compute_metrics(&cm, averaging)?;
    Ok((cm, metrics))
}

/// Runs one (selector, k, classifier) cell on one fold.
pub fn run_pipeline_fold(
    dataset: &EmbeddingDataset,
    plan: &FoldPlan,
    fold: usize,
    selector: SelectorKind,
    k: Option<usize>,
    classifier: &ClassifierConfig,
    settings: &PipelineSettings,
) -> Result<MetricRow> {
    if let Some(k) = k {
        if selector != SelectorKind::None && (k == 0 || k > dataset.n_features()) {
            return Err(Error::Argument(format!("k={k} outside 1..={}", dataset.n_features())));
        }
    }
    let prep = prepare_fold(dataset, plan, fold)?;
    let mask = fold_mask(&prep, selector, k, settings)?;
    let (_, metrics) = evaluate_with_mask(&prep, &mask, classifier, settings.averaging)?;
    Ok(MetricRow {
        selector,
        k: if selector == SelectorKind::None { None } else { k },
        classifier: classifier.family,
        fold: FoldTag::Fold(fold),
        metrics,
    })
}
