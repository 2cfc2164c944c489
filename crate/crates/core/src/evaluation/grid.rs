//! The full experiment grid: a no-selection baseline plus every
//! (selector, k) pair, crossed with every classifier, over all folds.
//!
//! Selector scores depend only on (selector, fold), so they are computed
//! once per fold and shared by every k and classifier. Folds run one after
//! another; within a fold, selectors and then cells may run in parallel.
//! Output order is fixed by [`grid_cells`] regardless of completion order.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::folds::{make_stratified_folds, FoldPlan};
use super::metrics::{Averaging, Metrics};
use super::pipeline::{evaluate_with_mask, fold_scores, prepare_fold, PipelineSettings};
use super::SelectorKind;
use crate::classifiers::{ClassifierConfig, Family};
use crate::dataset::{EmbeddingDataset, FeatureMask};
use crate::error::{Error, Result};
use crate::selectors::{select_top_k, FeatureScores, MiConfig, NcaConfig};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridConfig {
    /// Include the `none` selector baseline row per classifier.
    pub baseline: bool,
    pub selectors: Vec<SelectorKind>,
    pub ks: Vec<usize>,
    pub classifiers: Vec<ClassifierConfig>,
    pub n_folds: usize,
    pub seed: u64,
    pub mi: MiConfig,
    pub nca: NcaConfig,
    pub averaging: Averaging,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            baseline: true,
            selectors: vec![SelectorKind::Chi2, SelectorKind::Mi, SelectorKind::Nca],
            ks: vec![200, 300, 400, 500],
            classifiers: Family::ALL.iter().map(|&f| ClassifierConfig::new(f)).collect(),
            n_folds: 5,
            seed: 0,
            mi: MiConfig::default(),
            nca: NcaConfig::default(),
            averaging: Averaging::Weighted,
        }
    }
}

impl GridConfig {
    pub fn settings(&self) -> PipelineSettings {
        PipelineSettings { mi: self.mi, nca: self.nca, averaging: self.averaging }
    }
}

/// One row group of the report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub selector: SelectorKind,
    pub k: Option<usize>,
    pub classifier: ClassifierConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FoldTag {
    Fold(usize),
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricRow {
    pub selector: SelectorKind,
    /// `None` for the no-selection baseline.
    pub k: Option<usize>,
    pub classifier: Family,
    pub fold: FoldTag,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentReport {
    /// Per cell: one row per fold, then the mean row.
    pub rows: Vec<MetricRow>,
}

impl ExperimentReport {
    pub fn mean_rows(&self) -> impl Iterator<Item = &MetricRow> {
        self.rows.iter().filter(|r| r.fold == FoldTag::Mean)
    }

    pub fn mean_of(&self, selector: SelectorKind, k: Option<usize>, family: Family) -> Option<&MetricRow> {
        self.mean_rows()
            .find(|r| r.selector == selector && r.k == k && r.classifier == family)
    }
}

/// Result store consulted before computing scores or fold metrics. Keys
/// describe the computation (selector, fold plan, settings) but not the
/// dataset; implementations that persist across datasets must mix one in.
pub trait GridCache: Sync {
    fn load_scores(&self, key: &str) -> Option<FeatureScores>;
    fn store_scores(&self, key: &str, scores: &FeatureScores);
    fn load_metrics(&self, key: &str) -> Option<Metrics>;
    fn store_metrics(&self, key: &str, metrics: &Metrics);
}

pub struct NoCache;

impl GridCache for NoCache {
    fn load_scores(&self, _: &str) -> Option<FeatureScores> {
        None
    }
    fn store_scores(&self, _: &str, _: &FeatureScores) {}
    fn load_metrics(&self, _: &str) -> Option<Metrics> {
        None
    }
    fn store_metrics(&self, _: &str, _: &Metrics) {}
}

/// Cells in report order: baseline per classifier, then selector × k × classifier.
pub fn grid_cells(config: &GridConfig) -> Vec<GridCell> {
    let mut cells = Vec::new();
    if config.baseline {
        for c in &config.classifiers {
            cells.push(GridCell { selector: SelectorKind::None, k: None, classifier: *c });
        }
    }
    for &s in config.selectors.iter().filter(|&&s| s != SelectorKind::None) {
        for &k in &config.ks {
            for c in &config.classifiers {
                cells.push(GridCell { selector: s, k: Some(k), classifier: *c });
            }
        }
    }
    cells
}

fn plan_key(plan: &FoldPlan) -> String {
    format!("folds={},seed={}", plan.n_folds, plan.seed)
}

fn scores_key(plan: &FoldPlan, fold: usize, selector: SelectorKind, s: &PipelineSettings) -> String {
    let cfg = match selector {
        SelectorKind::Mi => format!("{:?}", s.mi),
        SelectorKind::Nca => format!("{:?}", s.nca),
        _ => String::new(),
    };
    format!("scores|{}|fold={fold}|{selector}|{cfg}", plan_key(plan))
}

fn cell_key(plan: &FoldPlan, fold: usize, cell: &GridCell, s: &PipelineSettings) -> String {
    format!(
        "metrics|{}|fold={fold}|{}|k={:?}|{:?}|{:?}|{:?}|{:?}",
        plan_key(plan),
        cell.selector,
        cell.k,
        cell.classifier,
        s.averaging,
        s.mi,
        s.nca
    )
}

#[cfg(feature = "parallel")]
fn map_ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

pub fn run_experiment_grid(dataset: &EmbeddingDataset, config: &GridConfig) -> Result<ExperimentReport> {
    run_experiment_grid_with(dataset, config, &NoCache, &|_| {})
}

/// Grid runner with a result cache and a progress sink (one line per finished stage).
pub fn run_experiment_grid_with(
    dataset: &EmbeddingDataset,
    config: &GridConfig,
    cache: &dyn GridCache,
    progress: &(dyn Fn(&str) + Sync),
) -> Result<ExperimentReport> {
    let p = dataset.n_features();
    if let Some(&bad) = config.ks.iter().find(|&&k| k == 0 || k > p) {
        return Err(Error::Argument(format!("k={bad} outside 1..={p}")));
    }
    if config.classifiers.is_empty() {
        return Err(Error::Argument("no classifiers requested".into()));
    }
    for c in &config.classifiers {
        c.validate()?;
    }
    let plan = make_stratified_folds(&dataset.label_ids(), config.n_folds, config.seed)?;
    let settings = config.settings();
    let cells = grid_cells(config);
    let mut selectors: Vec<SelectorKind> =
        config.selectors.iter().copied().filter(|&s| s != SelectorKind::None).collect();
    selectors.sort_unstable();
    selectors.dedup();

    // per_cell[c][f]
    let mut per_cell: Vec<Vec<Metrics>> = vec![Vec::with_capacity(plan.n_folds); cells.len()];
    for fold in 0..plan.n_folds {
        let prep = prepare_fold(dataset, &plan, fold)?;

        let scores: Vec<Result<FeatureScores>> = map_ordered(&selectors, |&s| {
            let key = scores_key(&plan, fold, s, &settings);
            if let Some(hit) = cache.load_scores(&key) {
                return Ok(hit);
            }
            let sc = fold_scores(&prep, s, &settings)?.expect("selector produces scores");
            cache.store_scores(&key, &sc);
            progress(&format!("fold {fold}: {s} scores ready"));
            Ok(sc)
        });
        let mut masks: Vec<(SelectorKind, usize, FeatureMask)> = Vec::new();
        for (s, sc) in selectors.iter().zip(scores) {
            let sc = sc?;
            for &k in &config.ks {
                masks.push((*s, k, select_top_k(&sc, k)?));
            }
        }
        let full = FeatureMask::all(p);

        let results: Vec<Result<Metrics>> = map_ordered(&cells, |cell| {
            let key = cell_key(&plan, fold, cell, &settings);
            if let Some(hit) = cache.load_metrics(&key) {
                return Ok(hit);
            }
            let mask = match cell.k {
                None => &full,
                Some(k) => {
                    &masks.iter().find(|(s, kk, _)| *s == cell.selector && *kk == k).expect("mask built").2
                }
            };
            let (_, m) = evaluate_with_mask(&prep, mask, &cell.classifier, settings.averaging)?;
            cache.store_metrics(&key, &m);
            Ok(m)
        });
        for (slot, r) in per_cell.iter_mut().zip(results) {
            slot.push(r?);
        }
        progress(&format!("fold {fold}: {} cells evaluated", cells.len()));
    }

    let mut rows = Vec::with_capacity(cells.len() * (plan.n_folds + 1));
    for (cell, folds) in cells.iter().zip(&per_cell) {
        let row = |fold, metrics| MetricRow {
            selector: cell.selector,
            k: cell.k,
            classifier: cell.classifier.family,
            fold,
            metrics,
        };
        for (f, m) in folds.iter().enumerate() {
            rows.push(row(FoldTag::Fold(f), *m));
        }
        rows.push(row(FoldTag::Mean, Metrics::mean(folds)));
    }
    Ok(ExperimentReport { rows })
}
