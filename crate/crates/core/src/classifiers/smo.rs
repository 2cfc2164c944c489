//! Soft-margin SVM dual solved by sequential minimal optimization.
//!
//! Minimises `f(α) = ½ αᵀQα − Σα` with `Q_ij = y_i y_j K_ij`, `0 ≤ α ≤ C`
//! and `Σ α_i y_i = 0`. Each step picks the pair with the largest first-order
//! violation and the best second-order gain, solves the two-variable
//! subproblem in closed form and clips it to the box. The loop ends when the
//! maximal KKT violation gap drops below `tol`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoParams {
    pub c: f64,
    pub tol: f64,
    /// Iteration budget, in multiples of the problem size.
    pub max_passes: usize,
    /// Keep the dual objective after every pair update.
    pub record_trace: bool,
}

impl Default for SmoParams {
    fn default() -> Self {
        Self { c: 1.0, tol: 1e-3, max_passes: 200, record_trace: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    /// Intercept of `f(x) = Σ α_i y_i K(x_i, x) + bias`.
    pub bias: f64,
    pub iterations: usize,
    /// False when the iteration budget ran out before the KKT gap closed.
    pub converged: bool,
    /// Dual objective `Σα − ½αᵀQα` after every update (empty unless requested).
    pub dual_trace: Vec<f64>,
}

#[inline]
fn in_up(y: f64, a: f64, c: f64) -> bool {
    (y > 0.0 && a < c) || (y < 0.0 && a > 0.0)
}

#[inline]
fn in_low(y: f64, a: f64, c: f64) -> bool {
    (y > 0.0 && a > 0.0) || (y < 0.0 && a < c)
}

fn dual(alpha: &[f64], grad: &[f64]) -> f64 {
    // f = ½ Σ α_i (G_i − 1) since G = Qα − 1
    -0.5 * alpha.iter().zip(grad).map(|(a, g)| a * (g - 1.0)).sum::<f64>()
}

/// Solves the binary dual for a precomputed kernel matrix and `±1` labels.
pub fn smo_solve(gram: &Matrix, y: &[f64], params: &SmoParams) -> Result<SmoSolution> {
    let m = y.len();
    if gram.rows() != m || gram.cols() != m {
        return Err(Error::Argument(format!(
            "gram is {}x{} but there are {m} labels",
            gram.rows(),
            gram.cols()
        )));
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::Argument("labels must be +1 or -1".into()));
    }
    if !(y.iter().any(|&v| v > 0.0) && y.iter().any(|&v| v < 0.0)) {
        return Err(Error::Degenerate("both labels must be present".into()));
    }
    if !(params.c > 0.0) || !(params.tol > 0.0) {
        return Err(Error::Argument("C and tol must be positive".into()));
    }
    let c = params.c;
    let q = |i: usize, j: usize| y[i] * y[j] * gram.get(i, j);

    let mut alpha = vec![0.0; m];
    let mut grad = vec![-1.0; m];
    let mut trace = Vec::new();
    let budget = params.max_passes.max(1) * m.max(10);
    let mut iterations = 0;
    let mut converged = false;

    loop {
        // i: maximal −y G over the "up" set
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..m {
            if in_up(y[t], alpha[t], c) {
                let v = -y[t] * grad[t];
                if v > gmax {
                    gmax = v;
                    i_sel = Some(t);
                }
            }
        }
        // j: best second-order gain over the "low" set
        let mut gmin = f64::INFINITY;
        let mut best_gain = f64::INFINITY;
        let mut j_sel = None;
        for t in 0..m {
            if in_low(y[t], alpha[t], c) {
                let v = -y[t] * grad[t];
                gmin = gmin.min(v);
                if let Some(i) = i_sel {
                    let b = gmax - v;
                    if b > 0.0 {
                        let mut a = gram.get(i, i) + gram.get(t, t) - 2.0 * gram.get(i, t);
                        if a <= 0.0 {
                            a = TAU;
                        }
                        let gain = -(b * b) / a;
                        if gain < best_gain {
                            best_gain = gain;
                            j_sel = Some(t);
                        }
                    }
                }
            }
        }
        if gmax - gmin < params.tol {
            converged = true;
            break;
        }
        let (Some(i), Some(j)) = (i_sel, j_sel) else {
            converged = true;
            break;
        };
        if iterations >= budget {
            break;
        }
        iterations += 1;

        let (old_ai, old_aj) = (alpha[i], alpha[j]);
        let (mut ai, mut aj) = (old_ai, old_aj);
        if y[i] != y[j] {
            let mut quad = gram.get(i, i) + gram.get(j, j) + 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = ai - aj;
            ai += delta;
            aj += delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > 0.0 {
                if ai > c {
                    ai = c;
                    aj = c - diff;
                }
            } else if aj > c {
                aj = c;
                ai = c + diff;
            }
        } else {
            let mut quad = gram.get(i, i) + gram.get(j, j) - 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = ai + aj;
            ai -= delta;
            aj += delta;
            if sum > c {
                if ai > c {
                    ai = c;
                    aj = sum - c;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > c {
                if aj > c {
                    aj = c;
                    ai = sum - c;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }
        alpha[i] = ai;
        alpha[j] = aj;
        let (dai, daj) = (ai - old_ai, aj - old_aj);
        for (t, g) in grad.iter_mut().enumerate() {
            *g += q(i, t) * dai + q(j, t) * daj;
        }
        if params.record_trace {
            trace.push(dual(&alpha, &grad));
        }
    }

    Ok(SmoSolution { bias: intercept(y, &alpha, &grad, c), alpha, iterations, converged, dual_trace: trace })
}

fn intercept(y: &[f64], alpha: &[f64], grad: &[f64], c: f64) -> f64 {
    let mut free_sum = 0.0;
    let mut free_n = 0usize;
    let mut up = f64::NEG_INFINITY;
    let mut low = f64::INFINITY;
    for t in 0..y.len() {
        let v = -y[t] * grad[t];
        if alpha[t] > 0.0 && alpha[t] < c {
            free_sum += v;
            free_n += 1;
        }
        if in_up(y[t], alpha[t], c) {
            up = up.max(v);
        }
        if in_low(y[t], alpha[t], c) {
            low = low.min(v);
        }
    }
    if free_n > 0 {
        free_sum / free_n as f64
    } else if up.is_finite() && low.is_finite() {
        0.5 * (up + low)
    } else if up.is_finite() {
        up
    } else if low.is_finite() {
        low
    } else {
        0.0
    }
}

/// Largest KKT violation of `(alpha, bias)` on the training problem.
pub fn kkt_violation(gram: &Matrix, y: &[f64], alpha: &[f64], bias: f64, c: f64) -> f64 {
    (0..y.len())
        .map(|t| {
            let f: f64 = (0..y.len()).map(|s| alpha[s] * y[s] * gram.get(s, t)).sum::<f64>() + bias;
            let margin = y[t] * f;
            if alpha[t] <= 0.0 {
                (1.0 - margin).max(0.0)
            } else if alpha[t] >= c {
                (margin - 1.0).max(0.0)
            } else {
                libm::fabs(margin - 1.0)
            }
        })
        .fold(0.0, f64::max)
}
