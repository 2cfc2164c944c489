use alloc::vec;
use alloc::vec::Vec;

use super::{classes_of, KnnParams};
use crate::error::Result;
use crate::matrix::{sq_dist, Matrix};

/// Brute-force Euclidean k-nearest-neighbour vote.
///
/// Equal distances prefer the lower training row; equal vote counts prefer
/// the lower class id.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KnnModel {
    pub k: usize,
    pub x: Matrix,
    pub labels: Vec<usize>,
    pub n_classes: usize,
}

impl KnnModel {
    pub fn fit(params: &KnnParams, x: &Matrix, labels: &[usize]) -> Result<Self> {
        let (_, n_classes) = classes_of(labels)?;
        Ok(Self { k: params.k, x: x.clone(), labels: labels.to_vec(), n_classes })
    }

    pub(crate) fn predict_row(&self, q: &[f64]) -> usize {
        let mut d: Vec<(f64, usize)> =
            self.x.iter_rows().enumerate().map(|(i, r)| (sq_dist(r, q), i)).collect();
        let k = self.k.min(d.len());
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut votes = vec![0usize; self.n_classes];
        for &(_, i) in &d[..k] {
            votes[self.labels[i]] += 1;
        }
        let mut best = 0;
        for (c, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = c;
            }
        }
        best
    }
}
