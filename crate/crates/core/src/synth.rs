//! Deterministic synthetic embedding datasets.
//!
//! Class means live on the first `informative` columns; each mean coordinate
//! is drawn from `N(0, separation² / 2)`, so two classes differ by
//! `separation` within-class standard deviations per informative column on
//! average. Draws are rejected until every pair of means is at least
//! `separation` apart. Rows add unit Gaussian noise on every column, and the
//! whole matrix is shifted by its global minimum so all values are
//! non-negative, like post-ReLU pooled activations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::dataset::EmbeddingDataset;
use crate::error::{Error, Result};
use crate::matrix::sq_dist;
use crate::rng::{stream, Purpose};

const MAX_MEAN_DRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SynthConfig {
    pub n_classes: usize,
    pub per_class: usize,
    pub p: usize,
    pub informative: usize,
    pub separation: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self { n_classes: 20, per_class: 30, p: 1280, informative: 64, separation: 4.0, seed: 7 }
    }
}

impl SynthConfig {
    fn validate(&self) -> Result<()> {
        if self.n_classes < 2 || self.p == 0 {
            return Err(Error::Argument("need n_classes >= 2 and p >= 1".into()));
        }
        if self.informative > self.p {
            return Err(Error::Argument(format!(
                "informative={} exceeds p={}",
                self.informative, self.p
            )));
        }
        if self.per_class < 5 {
            return Err(Error::Argument("per_class must be >= 5".into()));
        }
        if !(self.separation >= 0.0) || !self.separation.is_finite() {
            return Err(Error::Argument("separation must be finite and >= 0".into()));
        }
        if self.separation > 0.0 && self.informative == 0 {
            return Err(Error::Argument("separation > 0 needs informative columns".into()));
        }
        Ok(())
    }
}

fn draw_means(config: &SynthConfig) -> Result<Vec<Vec<f64>>> {
    let mut rng = stream(config.seed, Purpose::SynthMeans);
    let scale = config.separation / core::f64::consts::SQRT_2;
    let min_sq = config.separation * config.separation;
    let mut means: Vec<Vec<f64>> = Vec::with_capacity(config.n_classes);
    let mut draws = 0;
    while means.len() < config.n_classes {
        draws += 1;
        if draws > MAX_MEAN_DRAWS * config.n_classes {
            return Err(Error::Argument(format!(
                "could not place {} class means {} apart in {} dimensions",
                config.n_classes, config.separation, config.informative
            )));
        }
        let m: Vec<f64> = (0..config.informative)
            .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
            .collect();
        if means.iter().all(|o| sq_dist(o, &m) >= min_sq) {
            means.push(m);
        }
    }
    Ok(means)
}

pub fn generate_synthetic_dataset(config: &SynthConfig) -> Result<EmbeddingDataset> {
    config.validate()?;
    let means = draw_means(config)?;
    let mut rng = stream(config.seed, Purpose::SynthNoise);
    let n = config.n_classes * config.per_class;
    let mut values = vec![0.0f64; n * config.p];
    let mut labels = Vec::with_capacity(n);
    for (c, mean) in means.iter().enumerate() {
        for r in 0..config.per_class {
            let row = &mut values[(c * config.per_class + r) * config.p..][..config.p];
            for (j, v) in row.iter_mut().enumerate() {
                let noise: f64 = rng.sample(StandardNormal);
                *v = noise + mean.get(j).copied().unwrap_or(0.0);
            }
            labels.push(c as u32);
        }
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let features = values.iter().map(|&v| (v - min) as f32).collect();
    let width = format!("{}", config.n_classes - 1).len();
    let class_names = (0..config.n_classes).map(|c| format!("signer_{c:0width$}")).collect();
    EmbeddingDataset::new(
        features,
        n,
        config.p,
        labels,
        class_names,
        format!(
            "synthetic classes={} per_class={} p={} informative={} separation={} seed={}",
            config.n_classes,
            config.per_class,
            config.p,
            config.informative,
            config.separation,
            config.seed
        ),
    )
}
