//! Multiclass kernel SVM built from binary SMO problems.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::smo::{smo_solve, SmoParams};
use super::{classes_of, Family, Kernel, Multiclass, SvmParams};
use crate::error::Result;
use crate::matrix::Matrix;

/// One binary decision function `Σ coef_s K(sv_s, x) + bias`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BinaryMachine {
    /// Class voted for when the decision value is positive.
    pub positive: usize,
    /// Class voted for otherwise; unused for one-vs-rest.
    pub negative: usize,
    /// Slots into [`SvmModel::support_vectors`].
    pub sv: Vec<u32>,
    /// `α_s y_s` per support vector.
    pub coef: Vec<f64>,
    pub bias: f64,
    pub converged: bool,
}

impl BinaryMachine {
    fn decision(&self, kvals: &[f64]) -> f64 {
        self.sv.iter().zip(&self.coef).map(|(&s, c)| c * kvals[s as usize]).sum::<f64>()
            + self.bias
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SvmModel {
    pub family: Family,
    pub kernel: Kernel,
    pub multiclass: Multiclass,
    pub classes: Vec<usize>,
    pub n_classes: usize,
    pub n_features: usize,
    /// Training rows that are support vectors of at least one machine.
    pub support_vectors: Matrix,
    pub machines: Vec<BinaryMachine>,
}

/// `1 / (p · mean column variance)`, or 1 when the data has no spread.
pub fn auto_gamma(x: &Matrix) -> f64 {
    let n = x.rows() as f64;
    let p = x.cols();
    let mut total = 0.0;
    for j in 0..p {
        let col = x.column(j);
        let mean = col.iter().sum::<f64>() / n;
        total += col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    }
    let mean_var = total / p as f64;
    if mean_var > 0.0 {
        1.0 / (p as f64 * mean_var)
    } else {
        1.0
    }
}

fn resolve_kernel(family: Family, params: &SvmParams, x: &Matrix) -> Kernel {
    let gamma = || params.gamma.unwrap_or_else(|| auto_gamma(x));
    match family {
        Family::SvmRbf => Kernel::Rbf { gamma: gamma() },
        Family::SvmPoly => Kernel::Poly { gamma: gamma(), degree: params.degree, coef0: params.coef0 },
        _ => Kernel::Linear,
    }
}

struct Pool {
    slot_of_row: BTreeMap<usize, u32>,
}

impl Pool {
    fn slot(&mut self, row: usize) -> u32 {
        let next = self.slot_of_row.len() as u32;
        *self.slot_of_row.entry(row).or_insert(next)
    }
}

#[allow(clippy::too_many_arguments)]
fn train_machine(
    x: &Matrix,
    kernel: &Kernel,
    rows: &[usize],
    y: &[f64],
    params: &SvmParams,
    pool: &mut Pool,
    positive: usize,
    negative: usize,
) -> Result<BinaryMachine> {
    let m = rows.len();
    let mut gram = Matrix::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            let k = kernel.eval(x.row(rows[a]), x.row(rows[b]));
            gram.set(a, b, k);
            gram.set(b, a, k);
        }
    }
    let sol = smo_solve(
        &gram,
        y,
        &SmoParams { c: params.c, tol: params.tol, max_passes: params.max_passes, record_trace: false },
    )?;
    let mut sv = Vec::new();
    let mut coef = Vec::new();
    for (t, &a) in sol.alpha.iter().enumerate() {
        if a > 0.0 {
            sv.push(pool.slot(rows[t]));
            coef.push(a * y[t]);
        }
    }
    Ok(BinaryMachine { positive, negative, sv, coef, bias: sol.bias, converged: sol.converged })
}

impl SvmModel {
    pub fn fit(family: Family, params: &SvmParams, x: &Matrix, labels: &[usize]) -> Result<Self> {
        let (classes, n_classes) = classes_of(labels)?;
        let kernel = resolve_kernel(family, params, x);
        let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            by_class.entry(l).or_default().push(i);
        }
        let mut pool = Pool { slot_of_row: BTreeMap::new() };
        let mut machines = Vec::new();
        match params.multiclass {
            Multiclass::Ovo => {
                for (ai, &a) in classes.iter().enumerate() {
                    for &b in &classes[ai + 1..] {
                        let mut rows = by_class[&a].clone();
                        rows.extend_from_slice(&by_class[&b]);
                        let y: Vec<f64> =
                            rows.iter().map(|&r| if labels[r] == a { 1.0 } else { -1.0 }).collect();
                        machines
                            .push(train_machine(x, &kernel, &rows, &y, params, &mut pool, a, b)?);
                    }
                }
            }
            Multiclass::Ovr => {
                let rows: Vec<usize> = (0..labels.len()).collect();
                for &a in &classes {
                    let y: Vec<f64> =
                        labels.iter().map(|&l| if l == a { 1.0 } else { -1.0 }).collect();
                    machines.push(train_machine(x, &kernel, &rows, &y, params, &mut pool, a, a)?);
                }
            }
        }
        // slots were handed out in first-use order; lay rows out to match
        let mut order: Vec<(u32, usize)> = pool.slot_of_row.iter().map(|(&r, &s)| (s, r)).collect();
        order.sort_unstable();
        let rows: Vec<usize> = order.into_iter().map(|(_, r)| r).collect();
        Ok(Self {
            family,
            kernel,
            multiclass: params.multiclass,
            classes,
            n_classes,
            n_features: x.cols(),
            support_vectors: x.select_rows(&rows),
            machines,
        })
    }

    /// Every machine converged within its iteration budget.
    pub fn converged(&self) -> bool {
        self.machines.iter().all(|m| m.converged)
    }

    pub fn decision_values(&self, x: &[f64]) -> Vec<f64> {
        let kvals: Vec<f64> =
            self.support_vectors.iter_rows().map(|sv| self.kernel.eval(sv, x)).collect();
        self.machines.iter().map(|m| m.decision(&kvals)).collect()
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> usize {
        let dec = self.decision_values(x);
        match self.multiclass {
            Multiclass::Ovr => self.machines[super::argmax(dec.into_iter())].positive,
            Multiclass::Ovo => {
                let mut votes = vec![0usize; self.n_classes];
                let mut sums = vec![0.0f64; self.n_classes];
                for (m, d) in self.machines.iter().zip(dec) {
                    if d > 0.0 {
                        votes[m.positive] += 1;
                    } else {
                        votes[m.negative] += 1;
                    }
                    sums[m.positive] += d;
                    sums[m.negative] -= d;
                }
                let mut best = self.classes[0];
                for &c in &self.classes[1..] {
                    let better = votes[c] > votes[best]
                        || (votes[c] == votes[best] && sums[c] > sums[best]);
                    if better {
                        best = c;
                    }
                }
                best
            }
        }
    }
}
