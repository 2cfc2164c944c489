//! Linear discriminant analysis with a pseudo-inverted pooled covariance.
//!
//! With `Σ` the pooled within-class covariance and `Σ⁺` its pseudo-inverse,
//! class `c` scores `δ_c(x) = xᵀΣ⁺μ_c − ½ μ_cᵀΣ⁺μ_c + ln π_c`. `Σ⁺` is never
//! formed: the centred training rows `A` (scaled so that `Σ = AᵀA`) are
//! factored by a thin SVD, and `Σ⁺μ_c = V diag(1/s²) Vᵀ μ_c` over the
//! singular values kept by the cutoff.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::{classes_of, LdaParams};
use crate::error::Result;
use crate::matrix::{dot, Matrix};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LdaModel {
    pub classes: Vec<usize>,
    pub n_features: usize,
    /// Row `t` holds `Σ⁺μ` for `classes[t]`.
    pub coef: Matrix,
    /// `−½ μᵀΣ⁺μ + ln π` per class.
    pub intercept: Vec<f64>,
    /// Number of singular directions kept.
    pub rank: usize,
}

impl LdaModel {
    pub fn fit(params: &LdaParams, x: &Matrix, labels: &[usize]) -> Result<Self> {
        let (classes, n_classes) = classes_of(labels)?;
        let (n, p) = (x.rows(), x.cols());
        let mut slot = vec![usize::MAX; n_classes];
        classes.iter().enumerate().for_each(|(t, &c)| slot[c] = t);

        let k = classes.len();
        let mut means = Matrix::zeros(k, p);
        let mut counts = vec![0usize; k];
        for (row, &l) in x.iter_rows().zip(labels) {
            let t = slot[l];
            counts[t] += 1;
            for (m, v) in means.row_mut(t).iter_mut().zip(row) {
                *m += v;
            }
        }
        for (t, &cnt) in counts.iter().enumerate() {
            means.row_mut(t).iter_mut().for_each(|m| *m /= cnt as f64);
        }

        let dof = (n.saturating_sub(k)).max(1) as f64;
        let scale = 1.0 / libm::sqrt(dof);
        let centred = DMatrix::from_fn(n, p, |i, j| (x.get(i, j) - means.get(slot[labels[i]], j)) * scale);
        let svd = centred.svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let s_max = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
        // eigenvalues of Σ are s², so the cutoff applies to s²
        let cutoff = params.svd_tol * s_max * s_max;
        let kept: Vec<usize> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s_max > 0.0 && s * s > cutoff)
            .map(|(i, _)| i)
            .collect();

        let mut coef = Matrix::zeros(k, p);
        let mut intercept = Vec::with_capacity(k);
        for t in 0..k {
            let mu = means.row(t);
            let w = coef.row_mut(t);
            for &r in &kept {
                let vr = v_t.row(r);
                let proj: f64 = vr.iter().zip(mu).map(|(a, b)| a * b).sum();
                let s = svd.singular_values[r];
                let f = proj / (s * s);
                for (wj, vj) in w.iter_mut().zip(vr.iter()) {
                    *wj += f * vj;
                }
            }
            let prior = counts[t] as f64 / n as f64;
            intercept.push(-0.5 * dot(coef.row(t), mu) + libm::log(prior));
        }
        Ok(Self { classes, n_features: p, coef, intercept, rank: kept.len() })
    }

    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        self.coef.iter_rows().zip(&self.intercept).map(|(w, b)| dot(w, x) + b).collect()
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> usize {
        self.classes[super::argmax(self.scores(x).into_iter())]
    }
}
