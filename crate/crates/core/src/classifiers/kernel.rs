use crate::matrix::{dot, sq_dist};

/// SVM kernel with its parameters resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Kernel {
    /// `exp(−γ‖x − z‖²)`
    Rbf { gamma: f64 },
    /// `(γ⟨x, z⟩ + coef0)^degree`
    Poly { gamma: f64, degree: u32, coef0: f64 },
    /// `⟨x, z⟩`
    Linear,
}

impl Kernel {
    #[inline]
    pub fn eval(&self, x: &[f64], z: &[f64]) -> f64 {
        match *self {
            Kernel::Rbf { gamma } => libm::exp(-gamma * sq_dist(x, z)),
            Kernel::Poly { gamma, degree, coef0 } => powi(gamma * dot(x, z) + coef0, degree),
            Kernel::Linear => dot(x, z),
        }
    }
}

fn powi(base: f64, exp: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}
