//! Seven classifier families behind one fit/predict contract.

pub mod gnb;
pub mod kernel;
pub mod knn;
pub mod lda;
pub mod smo;
pub mod svm;
pub mod tree;

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub use kernel::Kernel;
pub use smo::{kkt_violation, smo_solve, SmoParams, SmoSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Family {
    SvmRbf,
    SvmPoly,
    SvmLinear,
    Knn,
    Dtree,
    Lda,
    Gnb,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::SvmRbf,
        Family::SvmPoly,
        Family::SvmLinear,
        Family::Knn,
        Family::Dtree,
        Family::Lda,
        Family::Gnb,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::SvmRbf => "svm_rbf",
            Family::SvmPoly => "svm_poly",
            Family::SvmLinear => "svm_linear",
            Family::Knn => "knn",
            Family::Dtree => "dtree",
            Family::Lda => "lda",
            Family::Gnb => "gnb",
        }
    }

    /// Whether the family is fitted on standardised rather than raw features.
    pub fn wants_standardized(self) -> bool {
        self != Family::Dtree
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Argument(format!("unknown classifier family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Multiclass {
    Ovo,
    Ovr,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SvmParams {
    pub c: f64,
    pub tol: f64,
    pub max_passes: usize,
    /// `None` resolves to `1 / (p · mean column variance)` of the training features.
    pub gamma: Option<f64>,
    pub degree: u32,
    pub coef0: f64,
    pub multiclass: Multiclass,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            tol: 1e-3,
            max_passes: 200,
            gamma: None,
            degree: 3,
            coef0: 0.0,
            multiclass: Multiclass::Ovo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self { k: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct TreeParams {
    pub min_samples_split: usize,
    pub max_depth: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { min_samples_split: 2, max_depth: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct GnbParams {
    /// Added to every variance, as a fraction of the largest column variance.
    pub var_smoothing: f64,
}

impl Default for GnbParams {
    fn default() -> Self {
        Self { var_smoothing: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct LdaParams {
    /// Singular values below this fraction of the largest are dropped from the pseudo-inverse.
    pub svd_tol: f64,
}

impl Default for LdaParams {
    fn default() -> Self {
        Self { svd_tol: 1e-9 }
    }
}

/// Family choice plus the hyperparameters of every family; only the
/// block matching `family` is consulted.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassifierConfig {
    pub family: Family,
    #[cfg_attr(feature = "serde", serde(default))]
    pub svm: SvmParams,
    #[cfg_attr(feature = "serde", serde(default))]
    pub knn: KnnParams,
    #[cfg_attr(feature = "serde", serde(default))]
    pub dtree: TreeParams,
    #[cfg_attr(feature = "serde", serde(default))]
    pub gnb: GnbParams,
    #[cfg_attr(feature = "serde", serde(default))]
    pub lda: LdaParams,
}

impl ClassifierConfig {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            svm: SvmParams::default(),
            knn: KnnParams::default(),
            dtree: TreeParams::default(),
            gnb: GnbParams::default(),
            lda: LdaParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.svm;
        if !(s.c > 0.0) || !(s.tol > 0.0) {
            return Err(Error::Argument("svm C and tol must be > 0".into()));
        }
        if s.degree == 0 {
            return Err(Error::Argument("svm degree must be >= 1".into()));
        }
        if let Some(g) = s.gamma {
            if !(g > 0.0) {
                return Err(Error::Argument("svm gamma must be > 0".into()));
            }
        }
        if self.knn.k == 0 {
            return Err(Error::Argument("knn k must be >= 1".into()));
        }
        if !(self.gnb.var_smoothing >= 0.0) || !(self.lda.svd_tol >= 0.0) {
            return Err(Error::Argument("smoothing and tolerances must be >= 0".into()));
        }
        Ok(())
    }
}

/// A fitted model of any family.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TrainedClassifier {
    Svm(svm::SvmModel),
    Knn(knn::KnnModel),
    Tree(tree::TreeModel),
    Lda(lda::LdaModel),
    Gnb(gnb::GnbModel),
}

impl TrainedClassifier {
    pub fn family(&self) -> Family {
        match self {
            TrainedClassifier::Svm(m) => m.family,
            TrainedClassifier::Knn(_) => Family::Knn,
            TrainedClassifier::Tree(_) => Family::Dtree,
            TrainedClassifier::Lda(_) => Family::Lda,
            TrainedClassifier::Gnb(_) => Family::Gnb,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            TrainedClassifier::Svm(m) => m.n_features,
            TrainedClassifier::Knn(m) => m.x.cols(),
            TrainedClassifier::Tree(m) => m.n_features,
            TrainedClassifier::Lda(m) => m.n_features,
            TrainedClassifier::Gnb(m) => m.n_features,
        }
    }

    fn predict_row(&self, x: &[f64]) -> usize {
        match self {
            TrainedClassifier::Svm(m) => m.predict_row(x),
            TrainedClassifier::Knn(m) => m.predict_row(x),
            TrainedClassifier::Tree(m) => m.predict_row(x),
            TrainedClassifier::Lda(m) => m.predict_row(x),
            TrainedClassifier::Gnb(m) => m.predict_row(x),
        }
    }
}

/// Sorted distinct class ids and the class count (max id + 1).
pub(crate) fn classes_of(labels: &[usize]) -> Result<(Vec<usize>, usize)> {
    let mut classes: Vec<usize> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::Degenerate("at least two classes are required".into()));
    }
    let c = classes[classes.len() - 1] + 1;
    Ok((classes, c))
}

/// Index of the largest score; the first wins on ties.
pub(crate) fn argmax(scores: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in scores.enumerate() {
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

pub fn fit(config: &ClassifierConfig, x: &Matrix, labels: &[usize]) -> Result<TrainedClassifier> {
    config.validate()?;
    if x.rows() != labels.len() {
        return Err(Error::Argument(format!("{} rows but {} labels", x.rows(), labels.len())));
    }
    if x.rows() < 2 {
        return Err(Error::Degenerate("need at least 2 training rows".into()));
    }
    if x.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("training features must be finite".into()));
    }
    Ok(match config.family {
        Family::SvmRbf | Family::SvmPoly | Family::SvmLinear => {
            TrainedClassifier::Svm(svm::SvmModel::fit(config.family, &config.svm, x, labels)?)
        }
        Family::Knn => TrainedClassifier::Knn(knn::KnnModel::fit(&config.knn, x, labels)?),
        Family::Dtree => TrainedClassifier::Tree(tree::TreeModel::fit(&config.dtree, x, labels)?),
        Family::Lda => TrainedClassifier::Lda(lda::LdaModel::fit(&config.lda, x, labels)?),
        Family::Gnb => TrainedClassifier::Gnb(gnb::GnbModel::fit(&config.gnb, x, labels)?),
    })
}

pub fn predict(model: &TrainedClassifier, x: &Matrix) -> Result<Vec<usize>> {
    if x.cols() != model.n_features() {
        return Err(Error::Argument(format!(
            "model expects {} features, got {}",
            model.n_features(),
            x.cols()
        )));
    }
    Ok(x.iter_rows().map(|r| model.predict_row(r)).collect())
}
