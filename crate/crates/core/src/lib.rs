//! Embedding-level signature verification: feature relevance scoring
//! (Chi², mutual information, neighbourhood component analysis), seven
//! classical classifier families, and stratified cross-validated evaluation.
//!
//! The crate is `no_std` + `alloc` unless the `std` feature is on. The
//! `parallel` feature parallelises NCA row passes and grid cells with rayon;
//! every reduction runs in a fixed order, so results do not depend on it.
//! File formats, the CLI and result caching live in the `sigselect` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod classifiers;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod matrix;
pub mod rng;
pub mod selectors;
pub mod standardize;
pub mod synth;

pub use classifiers::{fit, predict, ClassifierConfig, Family, TrainedClassifier};
pub use dataset::{validate_dataset, EmbeddingDataset, FeatureMask, ValidationReport};
pub use error::{Error, Result};
pub use evaluation::{
    compute_metrics, confusion_matrix, make_stratified_folds, run_experiment_grid,
    run_pipeline_fold, Averaging, ConfusionMatrix, ExperimentReport, FoldPlan, GridConfig,
    MetricRow, SelectorKind,
};
pub use matrix::Matrix;
pub use selectors::{
    chi2_scores, mi_scores, nca_fit, select_top_k, FeatureScores, MiConfig, NcaConfig,
    ScoreMethod,
};
pub use synth::{generate_synthetic_dataset, SynthConfig};
