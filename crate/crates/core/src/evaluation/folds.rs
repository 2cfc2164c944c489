use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};

/// Assignment of every row to one of `n_folds` test folds.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoldPlan {
    pub fold_of: Vec<usize>,
    pub n_folds: usize,
    pub seed: u64,
}

impl FoldPlan {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] != fold).collect()
    }
}

/// Stratified split: each class's rows are shuffled with the seed and dealt
/// round-robin to the folds, so per-class fold sizes differ by at most one.
pub fn make_stratified_folds(labels: &[usize], n_folds: usize, seed: u64) -> Result<FoldPlan> {
    if n_folds < 2 {
        return Err(Error::Argument(format!("need at least 2 folds, got {n_folds}")));
    }
    let c = labels.iter().max().map_or(0, |&m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); c];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    let mut rng = stream(seed, Purpose::Folds);
    let mut fold_of = vec![0usize; labels.len()];
    for (class, rows) in members.iter_mut().enumerate() {
        if rows.is_empty() {
            continue;
        }
        if rows.len() < n_folds {
            return Err(Error::Argument(format!(
                "class {class} has {} rows, fewer than {n_folds} folds",
                rows.len()
            )));
        }
        rows.shuffle(&mut rng);
        for (t, &r) in rows.iter().enumerate() {
            fold_of[r] = t % n_folds;
        }
    }
    Ok(FoldPlan { fold_of, n_folds, seed })
}
