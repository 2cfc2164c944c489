use alloc::vec;
use alloc::vec::Vec;

use super::{classes_of, GnbParams};
use crate::error::Result;
use crate::matrix::Matrix;

/// Gaussian naive Bayes. Every variance is padded by
/// `var_smoothing × (largest column variance)` so unseen spreads never
/// produce a zero likelihood.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GnbModel {
    pub classes: Vec<usize>,
    pub n_features: usize,
    pub means: Matrix,
    pub variances: Matrix,
    pub log_priors: Vec<f64>,
    pub epsilon: f64,
}

impl GnbModel {
    pub fn fit(params: &GnbParams, x: &Matrix, labels: &[usize]) -> Result<Self> {
        let (classes, n_classes) = classes_of(labels)?;
        let (n, p) = (x.rows(), x.cols());
        let k = classes.len();
        let mut slot = vec![0usize; n_classes];
        classes.iter().enumerate().for_each(|(t, &c)| slot[c] = t);

        let mut counts = vec![0usize; k];
        let mut means = Matrix::zeros(k, p);
        for (row, &l) in x.iter_rows().zip(labels) {
            counts[slot[l]] += 1;
            for (m, v) in means.row_mut(slot[l]).iter_mut().zip(row) {
                *m += v;
            }
        }
        for t in 0..k {
            let c = counts[t] as f64;
            means.row_mut(t).iter_mut().for_each(|m| *m /= c);
        }
        let mut variances = Matrix::zeros(k, p);
        for (row, &l) in x.iter_rows().zip(labels) {
            let t = slot[l];
            for j in 0..p {
                let d = row[j] - means.get(t, j);
                variances.set(t, j, variances.get(t, j) + d * d);
            }
        }

        let mut max_var = 0.0f64;
        for j in 0..p {
            let col = x.column(j);
            let mu = col.iter().sum::<f64>() / n as f64;
            let var = col.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n as f64;
            max_var = max_var.max(var);
        }
        let mut epsilon = params.var_smoothing * max_var;
        if epsilon <= 0.0 {
            epsilon = f64::MIN_POSITIVE;
        }
        for t in 0..k {
            let c = counts[t] as f64;
            variances.row_mut(t).iter_mut().for_each(|v| *v = *v / c + epsilon);
        }
        let log_priors = counts.iter().map(|&c| libm::log(c as f64 / n as f64)).collect();
        Ok(Self { classes, n_features: p, means, variances, log_priors, epsilon })
    }

    /// Joint log-likelihood `ln π_c + Σ_j ln N(x_j; μ_cj, σ²_cj)` per class.
    pub fn log_likelihoods(&self, x: &[f64]) -> Vec<f64> {
        const LN_2PI: f64 = 1.8378770664093453;
        (0..self.classes.len())
            .map(|t| {
                let ll: f64 = x
                    .iter()
                    .zip(self.means.row(t))
                    .zip(self.variances.row(t))
                    .map(|((v, m), s)| {
                        let d = v - m;
                        LN_2PI + libm::log(*s) + d * d / s
                    })
                    .sum();
                self.log_priors[t] - 0.5 * ll
            })
            .collect()
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> usize {
        self.classes[super::argmax(self.log_likelihoods(x).into_iter())]
    }
}
