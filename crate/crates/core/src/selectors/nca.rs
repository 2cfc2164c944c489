//! Diagonal neighbourhood component analysis for feature weighting.
//!
//! Each feature `r` carries a weight `w_r`; the weighted L1 distance
//! `d(i, j) = Σ_r w_r² |x_ir − x_jr|` defines soft neighbour probabilities
//! `p_ij ∝ exp(−d(i, j) / σ)` over `j ≠ i`. The learner maximises
//!
//! ```text
//! F(w) = (1/n) Σ_i Σ_{j: y_j = y_i} p_ij  −  λ Σ_r w_r²
//! ```
//!
//! by full-batch gradient ascent with an adaptive step (doubled after an
//! accepted step, halved after a rejected one). The gradient is
//!
//! ```text
//! ∂F/∂w_r = (2 w_r / σ) (1/n) Σ_i [ p_i Σ_j p_ij a_ijr − Σ_{j: y_j = y_i} p_ij a_ijr ] − 2 λ w_r
//! ```
//!
//! with `a_ijr = |x_ir − x_jr|` and `p_i` the same-class mass of row `i`.
//!
//! Rows are processed in fixed blocks whose partial sums are added in block
//! order, with or without the `parallel` feature, so results are bit-identical
//! either way.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{check_rows, class_count, FeatureScores, ScoreMethod};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

const ROW_BLOCK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NcaConfig {
    /// Kernel width σ.
    pub sigma: f64,
    /// Penalty weight λ; `None` means `1 / n_train`.
    pub lambda: Option<f64>,
    pub max_iters: usize,
    pub initial_step: f64,
    pub objective_tol: f64,
    /// Recorded with the run. The optimiser itself is deterministic (w₀ = 1).
    pub seed: u64,
}

impl Default for NcaConfig {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            lambda: None,
            max_iters: 100,
            initial_step: 1e-2,
            objective_tol: 1e-6,
            seed: 0,
        }
    }
}

impl NcaConfig {
    fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) {
            return Err(Error::Argument(format!("sigma must be > 0, got {}", self.sigma)));
        }
        if let Some(l) = self.lambda {
            if !(l >= 0.0) {
                return Err(Error::Argument(format!("lambda must be >= 0, got {l}")));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::Argument("max_iters must be >= 1".into()));
        }
        if !(self.initial_step > 0.0) {
            return Err(Error::Argument("initial_step must be > 0".into()));
        }
        Ok(())
    }

    fn lambda_for(&self, n: usize) -> f64 {
        self.lambda.unwrap_or(1.0 / n as f64)
    }
}

/// Outcome of [`nca_optimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct NcaFit {
    /// `w_r²` per feature.
    pub scores: FeatureScores,
    pub weights: Vec<f64>,
    /// Objective after the initial evaluation and after every accepted step.
    pub objective_trace: Vec<f64>,
    /// Attempted steps, accepted or not.
    pub iterations: usize,
    /// Stopped because an accepted step improved F by less than the tolerance.
    pub converged: bool,
}

struct Problem<'a> {
    x: &'a Matrix,
    labels: &'a [usize],
    sigma: f64,
    lambda: f64,
}

impl Problem<'_> {
    /// Same-class probability of row `i`, and (optionally) its unscaled
    /// gradient contribution `Σ_j (p_i p_ij − [y_j = y_i] p_ij) a_ijr` added into `acc`.
    fn row(&self, i: usize, w2: &[f64], dist: &mut [f64], acc: Option<&mut [f64]>) -> f64 {
        let n = self.x.rows();
        let xi = self.x.row(i);
        let mut dmin = f64::INFINITY;
        for j in 0..n {
            if j == i {
                continue;
            }
            let d: f64 = xi
                .iter()
                .zip(self.x.row(j))
                .zip(w2)
                .map(|((a, b), w)| w * libm::fabs(a - b))
                .sum();
            dist[j] = d;
            dmin = dmin.min(d);
        }
        let mut z = 0.0;
        for j in 0..n {
            if j != i {
                let k = libm::exp(-(dist[j] - dmin) / self.sigma);
                dist[j] = k;
                z += k;
            }
        }
        let yi = self.labels[i];
        let mut same = 0.0;
        for j in 0..n {
            if j != i {
                dist[j] /= z;
                if self.labels[j] == yi {
                    same += dist[j];
                }
            }
        }
        if let Some(acc) = acc {
            for j in 0..n {
                if j == i {
                    continue;
                }
                let pij = dist[j];
                let coef = if self.labels[j] == yi { same * pij - pij } else { same * pij };
                if coef == 0.0 {
                    continue;
                }
                for ((g, a), b) in acc.iter_mut().zip(xi).zip(self.x.row(j)) {
                    *g += coef * libm::fabs(a - b);
                }
            }
        }
        same
    }

    /// Sum of same-class probabilities and gradient accumulator over a row block.
    fn block(&self, rows: core::ops::Range<usize>, w2: &[f64], grad: bool) -> (f64, Vec<f64>) {
        let p = self.x.cols();
        let mut dist = vec![0.0; self.x.rows()];
        let mut acc = if grad { vec![0.0; p] } else { Vec::new() };
        let mut total = 0.0;
        for i in rows {
            let a = if grad { Some(acc.as_mut_slice()) } else { None };
            total += self.row(i, w2, &mut dist, a);
        }
        (total, acc)
    }

    fn evaluate(&self, w: &[f64], grad: bool) -> (f64, Option<Vec<f64>>) {
        let n = self.x.rows();
        let p = self.x.cols();
        let w2: Vec<f64> = w.iter().map(|v| v * v).collect();
        let blocks: Vec<core::ops::Range<usize>> = (0..n)
            .step_by(ROW_BLOCK)
            .map(|s| s..(s + ROW_BLOCK).min(n))
            .collect();

        #[cfg(feature = "parallel")]
        let parts: Vec<(f64, Vec<f64>)> = {
            use rayon::prelude::*;
            blocks.into_par_iter().map(|b| self.block(b, &w2, grad)).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let parts: Vec<(f64, Vec<f64>)> =
            blocks.into_iter().map(|b| self.block(b, &w2, grad)).collect();

        let mut same = 0.0;
        let mut acc = vec![0.0; if grad { p } else { 0 }];
        for (s, a) in parts {
            same += s;
            for (t, v) in acc.iter_mut().zip(a) {
                *t += v;
            }
        }
        let nf = n as f64;
        let penalty: f64 = w2.iter().sum::<f64>() * self.lambda;
        let f = same / nf - penalty;
        let g = grad.then(|| {
            w.iter()
                .zip(&acc)
                .map(|(wr, a)| 2.0 * wr / self.sigma * a / nf - 2.0 * self.lambda * wr)
                .collect()
        });
        (f, g)
    }
}

fn problem<'a>(x: &'a Matrix, labels: &'a [usize], config: &NcaConfig) -> Result<Problem<'a>> {
    config.validate()?;
    check_rows(x.rows(), labels)?;
    if x.rows() < 2 {
        return Err(Error::Degenerate("NCA needs at least 2 rows".into()));
    }
    class_count(labels)?;
    Ok(Problem { x, labels, sigma: config.sigma, lambda: config.lambda_for(x.rows()) })
}

fn check_weights(x: &Matrix, w: &[f64]) -> Result<()> {
    if w.len() != x.cols() {
        return Err(Error::Argument(format!("{} weights for {} features", w.len(), x.cols())));
    }
    Ok(())
}

/// Objective `F(w)`.
pub fn nca_objective(x: &Matrix, labels: &[usize], w: &[f64], config: &NcaConfig) -> Result<f64> {
    check_weights(x, w)?;
    Ok(problem(x, labels, config)?.evaluate(w, false).0)
}

/// Analytic gradient `∂F/∂w`.
pub fn nca_gradient(
    x: &Matrix,
    labels: &[usize],
    w: &[f64],
    config: &NcaConfig,
) -> Result<Vec<f64>> {
    check_weights(x, w)?;
    Ok(problem(x, labels, config)?.evaluate(w, true).1.expect("gradient requested"))
}

/// Runs the optimiser from `w = 1` and returns weights with diagnostics.
pub fn nca_optimize(x: &Matrix, labels: &[usize], config: &NcaConfig) -> Result<NcaFit> {
    let prob = problem(x, labels, config)?;
    let mut w = vec![1.0; x.cols()];
    let (mut f, g) = prob.evaluate(&w, true);
    let mut g = g.expect("gradient requested");
    let mut trace = vec![f];
    let mut step = config.initial_step;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iters {
        iterations += 1;
        let candidate: Vec<f64> = w.iter().zip(&g).map(|(wr, gr)| wr + step * gr).collect();
        let (fc, gc) = prob.evaluate(&candidate, true);
        if fc >= f {
            let delta = fc - f;
            w = candidate;
            f = fc;
            g = gc.expect("gradient requested");
            trace.push(f);
            step *= 2.0;
            if delta < config.objective_tol {
                converged = true;
                break;
            }
        } else {
            step *= 0.5;
            if step < f64::MIN_POSITIVE {
                break;
            }
        }
    }

    let scores = w.iter().map(|v| v * v).collect();
    Ok(NcaFit {
        scores: FeatureScores { scores, method: ScoreMethod::Nca },
        weights: w,
        objective_trace: trace,
        iterations,
        converged,
    })
}

/// Learned squared feature weights as relevance scores.
pub fn nca_fit(x: &Matrix, labels: &[usize], config: &NcaConfig) -> Result<FeatureScores> {
    nca_optimize(x, labels, config).map(|fit| fit.scores)
}
