use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{check_rows, class_count, FeatureScores, ScoreMethod};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Chi² relevance of every non-negative feature column.
///
/// Each column is treated as class-conditional mass: `O[c] = Σ_{y_i = c} x_i`
/// is compared with `E[c] = (n_c / n) · Σ_i x_i` as `Σ_c (O[c] − E[c])² / E[c]`.
/// Columns whose total mass is zero score 0.
pub fn chi2_scores(x: &Matrix, labels: &[usize]) -> Result<FeatureScores> {
    check_rows(x.rows(), labels)?;
    let c = class_count(labels)?;
    let p = x.cols();
    let n = x.rows() as f64;

    let mut observed = vec![vec![0.0f64; p]; c];
    let mut class_n = vec![0usize; c];
    for (i, (row, &y)) in x.iter_rows().zip(labels).enumerate() {
        if let Some(j) = row.iter().position(|&v| v < 0.0) {
            return Err(Error::Domain(format!(
                "chi2 requires non-negative features; column {j} is negative at row {i}"
            )));
        }
        class_n[y] += 1;
        for (o, v) in observed[y].iter_mut().zip(row) {
            *o += v;
        }
    }

    let mut scores: Vec<f64> = vec![0.0; p];
    for (j, s) in scores.iter_mut().enumerate() {
        let total: f64 = observed.iter().map(|o| o[j]).sum();
        if total <= 0.0 {
            continue;
        }
        *s = observed
            .iter()
            .zip(&class_n)
            .filter(|(_, &k)| k > 0)
            .map(|(o, &k)| {
                let expected = k as f64 / n * total;
                let d = o[j] - expected;
                d * d / expected
            })
            .sum();
    }
    Ok(FeatureScores { scores, method: ScoreMethod::Chi2 })
}
