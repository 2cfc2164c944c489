//! In-memory embedding dataset and the selected-column mask.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// An `n × p` matrix of embedding activations with one class label per row.
///
/// Class ids are dense, `0..c`, and follow the sorted order of `class_names`;
/// the constructor rejects unsorted or duplicate names so that two datasets
/// with the same signers always agree on ids.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingDataset {
    features: Vec<f32>,
    n: usize,
    p: usize,
    labels: Vec<u32>,
    class_names: Vec<String>,
    provenance: String,
}

impl EmbeddingDataset {
    pub fn new(
        features: Vec<f32>,
        n: usize,
        p: usize,
        labels: Vec<u32>,
        class_names: Vec<String>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::Data(format!("empty dataset shape {n}x{p}")));
        }
        if features.len() != n * p {
            return Err(Error::Data(format!(
                "feature buffer has {} values, expected {}",
                features.len(),
                n * p
            )));
        }
        if labels.len() != n {
            return Err(Error::Data(format!("{} labels for {} rows", labels.len(), n)));
        }
        let c = class_names.len();
        if c < 2 {
            return Err(Error::Data(format!("need at least 2 classes, got {c}")));
        }
        if let Some(w) = class_names.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Data(format!(
                "class names must be strictly increasing: {:?} then {:?}",
                w[0], w[1]
            )));
        }
        let mut counts = vec![0usize; c];
        for (i, &l) in labels.iter().enumerate() {
            let l = l as usize;
            if l >= c {
                return Err(Error::Data(format!("row {i} has label {l} but only {c} classes")));
            }
            counts[l] += 1;
        }
        if let Some(empty) = counts.iter().position(|&k| k == 0) {
            return Err(Error::Data(format!("class {:?} has no rows", class_names[empty])));
        }
        if let Some(bad) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "non-finite value at row {}, column {}",
                bad / p,
                bad % p
            )));
        }
        Ok(Self { features, n, p, labels, class_names, provenance: provenance.into() })
    }

    /// Builds a dataset from per-row class names; ids are assigned by sorted name.
    pub fn from_named_rows<S: AsRef<str>>(
        row_classes: &[S],
        features: Vec<f32>,
        p: usize,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let mut ids: BTreeMap<&str, u32> = BTreeMap::new();
        for name in row_classes {
            ids.insert(name.as_ref(), 0);
        }
        for (k, v) in ids.values_mut().enumerate() {
            *v = k as u32;
        }
        let labels = row_classes.iter().map(|s| ids[s.as_ref()]).collect();
        let class_names = ids.keys().map(|s| s.to_string()).collect();
        Self::new(features, row_classes.len(), p, labels, class_names, provenance)
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn n_features(&self) -> usize {
        self.p
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn features(&self) -> &[f32] {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.features[i * self.p..(i + 1) * self.p]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Labels widened to `usize`.
    pub fn label_ids(&self) -> Vec<usize> {
        self.labels.iter().map(|&l| l as usize).collect()
    }

    /// Features widened to `f64`.
    pub fn to_matrix(&self) -> Matrix {
        let data = self.features.iter().map(|&v| f64::from(v)).collect();
        Matrix::from_vec(self.n, self.p, data).expect("shape checked at construction")
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes()];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        counts
    }
}

/// Summary produced by [`validate_dataset`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub n_rows: usize,
    pub n_features: usize,
    pub class_counts: Vec<usize>,
    pub min_value: f32,
    pub max_value: f32,
    pub negative_count: usize,
    /// First (row, column) holding a negative value, if any.
    pub first_negative: Option<(usize, usize)>,
    /// Every class has the same number of rows.
    pub balanced: bool,
    /// Classes whose row count differs from the most common count.
    pub unbalanced_classes: Vec<usize>,
    /// No negative values, so Chi² scoring is applicable to raw features.
    pub chi2_eligible: bool,
}

/// Per-class counts, value range and Chi² eligibility. Never fails.
pub fn validate_dataset(dataset: &EmbeddingDataset) -> ValidationReport {
    let class_counts = dataset.class_counts();
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for &k in &class_counts {
        *freq.entry(k).or_default() += 1;
    }
    // most common count; ties go to the larger count
    let modal = freq
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0)))
        .map(|(&k, _)| k)
        .unwrap_or(0);
    let unbalanced_classes: Vec<usize> = class_counts
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != modal)
        .map(|(c, _)| c)
        .collect();

    let mut min_value = f32::INFINITY;
    let mut max_value = f32::NEG_INFINITY;
    let mut negative_count = 0;
    let mut first_negative = None;
    for (idx, &v) in dataset.features().iter().enumerate() {
        min_value = min_value.min(v);
        max_value = max_value.max(v);
        if v < 0.0 {
            negative_count += 1;
            if first_negative.is_none() {
                first_negative = Some((idx / dataset.p, idx % dataset.p));
            }
        }
    }
    ValidationReport {
        n_rows: dataset.n,
        n_features: dataset.p,
        balanced: unbalanced_classes.is_empty(),
        unbalanced_classes,
        class_counts,
        min_value,
        max_value,
        negative_count,
        first_negative,
        chi2_eligible: negative_count == 0,
    }
}

/// Sorted, distinct column indices chosen by a selector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureMask {
    selected: Vec<usize>,
}

impl FeatureMask {
    /// `selected` must be strictly increasing and below `p`.
    pub fn new(selected: Vec<usize>, p: usize) -> Result<Self> {
        if selected.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument("mask indices must be strictly increasing".into()));
        }
        if let Some(&last) = selected.last() {
            if last >= p {
                return Err(Error::Argument(format!("mask index {last} out of range for p={p}")));
            }
        }
        Ok(Self { selected })
    }

    pub fn all(p: usize) -> Self {
        Self { selected: (0..p).collect() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.selected
    }

    pub fn k(&self) -> usize {
        self.selected.len()
    }
}
