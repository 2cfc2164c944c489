//! Run configuration shared by the `select`, `fit`, `evaluate` and `grid`
//! subcommands. The same flat structure parses from flags and from a JSON
//! file given with `--config`; flags win field by field.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use sigselect_core::classifiers::Multiclass;
use sigselect_core::{Averaging, ClassifierConfig, Family, GridConfig, MiConfig, NcaConfig, SelectorKind};

use crate::error::{Error, Result};

fn parse_averaging(s: &str) -> std::result::Result<Averaging, String> {
    match s {
        "weighted" => Ok(Averaging::Weighted),
        "macro" => Ok(Averaging::Macro),
        _ => Err(format!("expected weighted or macro, got {s:?}")),
    }
}

fn parse_multiclass(s: &str) -> std::result::Result<Multiclass, String> {
    match s {
        "ovo" => Ok(Multiclass::Ovo),
        "ovr" => Ok(Multiclass::Ovr),
        _ => Err(format!("expected ovo or ovr, got {s:?}")),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Embedding file (.sgvf, or .csv for the text form).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Output directory or file, depending on the subcommand.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Root seed for fold assignment.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated selectors: chi2, mi, nca (none for the baseline).
    #[arg(long, alias = "selector", value_delimiter = ',')]
    pub selectors: Option<Vec<SelectorKind>>,
    /// Comma-separated feature counts.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
    /// Comma-separated classifier families.
    #[arg(long, alias = "classifier", value_delimiter = ',')]
    pub classifiers: Option<Vec<Family>>,
    #[arg(long)]
    pub folds: Option<usize>,
    /// weighted or macro.
    #[arg(long, value_parser = parse_averaging)]
    pub averaging: Option<Averaging>,
    /// Skip the no-selection baseline rows of the grid.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub no_baseline: Option<bool>,

    #[arg(long)]
    pub svm_c: Option<f64>,
    #[arg(long)]
    pub svm_tol: Option<f64>,
    #[arg(long)]
    pub svm_max_passes: Option<usize>,
    /// RBF/poly gamma; default 1/(p · mean feature variance).
    #[arg(long)]
    pub svm_gamma: Option<f64>,
    #[arg(long)]
    pub svm_degree: Option<u32>,
    #[arg(long)]
    pub svm_coef0: Option<f64>,
    /// ovo or ovr.
    #[arg(long, value_parser = parse_multiclass)]
    pub multiclass: Option<Multiclass>,
    #[arg(long)]
    pub knn_k: Option<usize>,
    #[arg(long)]
    pub tree_max_depth: Option<usize>,
    #[arg(long)]
    pub tree_min_samples_split: Option<usize>,
    #[arg(long)]
    pub gnb_var_smoothing: Option<f64>,
    #[arg(long)]
    pub lda_svd_tol: Option<f64>,
    #[arg(long)]
    pub mi_bins: Option<usize>,
    #[arg(long)]
    pub nca_sigma: Option<f64>,
    /// NCA penalty; default 1/n_train.
    #[arg(long)]
    pub nca_lambda: Option<f64>,
    #[arg(long)]
    pub nca_max_iters: Option<usize>,
    #[arg(long)]
    pub nca_initial_step: Option<f64>,
    #[arg(long)]
    pub nca_tol: Option<f64>,
}

macro_rules! overlay {
    ($lo:ident, $hi:ident; $($f:ident),* $(,)?) => {
        RunConfig { $($f: $hi.$f.or($lo.$f)),* }
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
    }

    /// Values in `self` take precedence over `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        let (lo, hi) = (base, self);
        overlay!(lo, hi; input, output, seed, selectors, k, classifiers, folds, averaging, no_baseline,
            svm_c, svm_tol, svm_max_passes, svm_gamma, svm_degree, svm_coef0, multiclass, knn_k,
            tree_max_depth, tree_min_samples_split, gnb_var_smoothing, lda_svd_tol, mi_bins,
            nca_sigma, nca_lambda, nca_max_iters, nca_initial_step, nca_tol)
    }

    pub fn resolve(self, config_file: Option<&Path>) -> Result<RunConfig> {
        match config_file {
            Some(p) => Ok(self.over(RunConfig::from_file(p)?)),
            None => Ok(self),
        }
    }

    pub fn input(&self) -> Result<&Path> {
        self.input.as_deref().ok_or_else(|| Error::Usage("--input is required".into()))
    }

    pub fn output(&self) -> Result<&Path> {
        self.output.as_deref().ok_or_else(|| Error::Usage("--output is required".into()))
    }

    pub fn classifier(&self, family: Family) -> ClassifierConfig {
        let mut c = ClassifierConfig::new(family);
        let s = &mut c.svm;
        s.c = self.svm_c.unwrap_or(s.c);
        s.tol = self.svm_tol.unwrap_or(s.tol);
        s.max_passes = self.svm_max_passes.unwrap_or(s.max_passes);
        s.gamma = self.svm_gamma.or(s.gamma);
        s.degree = self.svm_degree.unwrap_or(s.degree);
        s.coef0 = self.svm_coef0.unwrap_or(s.coef0);
        s.multiclass = self.multiclass.unwrap_or(s.multiclass);
        c.knn.k = self.knn_k.unwrap_or(c.knn.k);
        c.dtree.max_depth = self.tree_max_depth.or(c.dtree.max_depth);
        c.dtree.min_samples_split = self.tree_min_samples_split.unwrap_or(c.dtree.min_samples_split);
        c.gnb.var_smoothing = self.gnb_var_smoothing.unwrap_or(c.gnb.var_smoothing);
        c.lda.svd_tol = self.lda_svd_tol.unwrap_or(c.lda.svd_tol);
        c
    }

    pub fn mi(&self) -> MiConfig {
        let d = MiConfig::default();
        MiConfig { bins: self.mi_bins.unwrap_or(d.bins) }
    }

    pub fn nca(&self) -> NcaConfig {
        let d = NcaConfig::default();
        NcaConfig {
            sigma: self.nca_sigma.unwrap_or(d.sigma),
            lambda: self.nca_lambda.or(d.lambda),
            max_iters: self.nca_max_iters.unwrap_or(d.max_iters),
            initial_step: self.nca_initial_step.unwrap_or(d.initial_step),
            objective_tol: self.nca_tol.unwrap_or(d.objective_tol),
            seed: self.seed.unwrap_or(d.seed),
        }
    }

    /// Grid settings with defaults filled in. A `none` entry in the selector
    /// list is the same as leaving the baseline on.
    pub fn grid(&self) -> GridConfig {
        let d = GridConfig::default();
        let selectors = self.selectors.clone().unwrap_or(d.selectors);
        let families = self.classifiers.clone().unwrap_or_else(|| Family::ALL.to_vec());
        GridConfig {
            baseline: !self.no_baseline.unwrap_or(false),
            selectors: selectors.into_iter().filter(|&s| s != SelectorKind::None).collect(),
            ks: self.k.clone().unwrap_or(d.ks),
            classifiers: families.into_iter().map(|f| self.classifier(f)).collect(),
            n_folds: self.folds.unwrap_or(d.n_folds),
            seed: self.seed.unwrap_or(d.seed),
            mi: self.mi(),
            nca: self.nca(),
            averaging: self.averaging.unwrap_or(d.averaging),
        }
    }
}
