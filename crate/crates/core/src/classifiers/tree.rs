//! CART classification tree grown on Gini impurity.

use alloc::vec;
use alloc::vec::Vec;

use super::{classes_of, TreeParams};
use crate::error::Result;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Node {
    Leaf { class: usize },
    /// Rows with `x[feature] <= threshold` go left.
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TreeModel {
    /// Node 0 is the root.
    pub nodes: Vec<Node>,
    pub n_features: usize,
}

struct Best {
    feature: usize,
    threshold: f64,
    decrease: f64,
}

fn gini(sumsq: f64, n: f64) -> f64 {
    1.0 - sumsq / (n * n)
}

fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (c, &k) in counts.iter().enumerate() {
        if k > counts[best] {
            best = c;
        }
    }
    best
}

/// Best midpoint split of `rows`; requires a strictly positive gap between neighbours.
fn best_split(x: &Matrix, labels: &[usize], rows: &[usize], counts: &[usize]) -> Option<Best> {
    let n = rows.len() as f64;
    let parent_sq: f64 = counts.iter().map(|&k| (k * k) as f64).sum();
    let parent = gini(parent_sq, n);
    let mut best: Option<Best> = None;
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(rows.len());
    let mut left = vec![0usize; counts.len()];
    let mut right = vec![0usize; counts.len()];

    for feature in 0..x.cols() {
        order.clear();
        order.extend(rows.iter().map(|&r| (x.get(r, feature), labels[r])));
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        if order[0].0 == order[order.len() - 1].0 {
            continue;
        }
        left.iter_mut().for_each(|v| *v = 0);
        right.copy_from_slice(counts);
        let (mut sq_l, mut sq_r) = (0.0f64, parent_sq);
        for t in 0..order.len() - 1 {
            let y = order[t].1;
            sq_l += (2 * left[y] + 1) as f64;
            sq_r -= (2 * right[y] - 1) as f64;
            left[y] += 1;
            right[y] -= 1;
            let (a, b) = (order[t].0, order[t + 1].0);
            if a == b {
                continue;
            }
            let nl = (t + 1) as f64;
            let nr = n - nl;
            let weighted = (nl * gini(sq_l, nl) + nr * gini(sq_r, nr)) / n;
            let decrease = parent - weighted;
            if best.as_ref().is_none_or(|b| decrease > b.decrease) {
                let mut threshold = a + (b - a) / 2.0;
                if threshold >= b {
                    threshold = a;
                }
                best = Some(Best { feature, threshold, decrease });
            }
        }
    }
    best
}

impl TreeModel {
    pub fn fit(params: &TreeParams, x: &Matrix, labels: &[usize]) -> Result<Self> {
        let (_, n_classes) = classes_of(labels)?;
        let mut nodes = vec![Node::Leaf { class: 0 }];
        // (node slot, rows, depth)
        let mut work: Vec<(usize, Vec<usize>, usize)> = vec![(0, (0..x.rows()).collect(), 0)];
        while let Some((slot, rows, depth)) = work.pop() {
            let mut counts = vec![0usize; n_classes];
            rows.iter().for_each(|&r| counts[labels[r]] += 1);
            let class = majority(&counts);
            let pure = counts[class] == rows.len();
            let depth_ok = params.max_depth.is_none_or(|d| depth < d);
            let split = if !pure && depth_ok && rows.len() >= params.min_samples_split.max(2) {
                best_split(x, labels, &rows, &counts)
            } else {
                None
            };
            match split {
                None => nodes[slot] = Node::Leaf { class },
                Some(b) => {
                    let (l, r): (Vec<usize>, Vec<usize>) =
                        rows.iter().partition(|&&i| x.get(i, b.feature) <= b.threshold);
                    let left = nodes.len();
                    nodes.push(Node::Leaf { class });
                    nodes.push(Node::Leaf { class });
                    nodes[slot] =
                        Node::Split { feature: b.feature, threshold: b.threshold, left, right: left + 1 };
                    work.push((left + 1, r, depth + 1));
                    work.push((left, l, depth + 1));
                }
            }
        }
        Ok(Self { nodes, n_features: x.cols() })
    }

    /// Length of the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
            }
        }
        go(&self.nodes, 0)
    }

    pub(crate) fn predict_row(&self, x: &[f64]) -> usize {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { class } => return class,
                Node::Split { feature, threshold, left, right } => {
                    i = if x[feature] <= threshold { left } else { right };
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::{fit, predict, ClassifierConfig, Family, TrainedClassifier};

    #[test]
    fn label_feature_gives_depth_one() {
        let x = Matrix::from_rows(&[[0.3, 0.0], [1.7, 1.0], [0.2, 0.0], [0.9, 1.0], [5.0, 0.0]]);
        let y = vec![0, 1, 0, 1, 0];
        let TrainedClassifier::Tree(t) = fit(&ClassifierConfig::new(Family::Dtree), &x, &y).unwrap()
        else {
            unreachable!()
        };
        assert_eq!(t.depth(), 1);
        assert!(matches!(t.nodes[0], Node::Split { feature: 1, threshold, .. } if threshold == 0.5));
        assert_eq!(predict(&TrainedClassifier::Tree(t), &x).unwrap(), y);
    }

    #[test]
    fn xor_needs_zero_gain_first_split() {
        let x = Matrix::from_rows(&[[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]]);
        let y = vec![0, 0, 1, 1];
        let m = fit(&ClassifierConfig::new(Family::Dtree), &x, &y).unwrap();
        assert_eq!(predict(&m, &x).unwrap(), y);
    }

    #[test]
    fn max_depth_limits_growth() {
        let x = Matrix::from_rows(&[[0.0], [1.0], [2.0], [3.0]]);
        let y = vec![0, 1, 0, 1];
        let mut cfg = ClassifierConfig::new(Family::Dtree);
        cfg.dtree.max_depth = Some(1);
        let TrainedClassifier::Tree(t) = fit(&cfg, &x, &y).unwrap() else { unreachable!() };
        assert_eq!(t.depth(), 1);
    }
}
