//! Command-line front end. [`cli_main`] never panics on bad input and maps
//! outcomes to exit codes: 0 success, 1 usage error, 2 data error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sigselect_core::evaluation::{run_experiment_grid_with, FoldTag, GridCache, PipelineSettings};
use sigselect_core::standardize::Standardizer;
use sigselect_core::{
    chi2_scores, fit, make_stratified_folds, mi_scores, nca_fit, run_pipeline_fold, select_top_k,
    validate_dataset, EmbeddingDataset, ExperimentReport, Family, FeatureMask, FeatureScores,
    MetricRow, SelectorKind, SynthConfig,
};

use crate::cache::DirCache;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::model::{load_model, save_model, ModelBundle};
use crate::{report, sgvf, textio};

#[derive(Debug, Parser)]
#[command(name = "sigselect", version, about = "Feature selection and classical classifiers over signature embeddings")]
pub struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = "SIGSELECT_JOBS")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic embedding dataset.
    Synth(SynthArgs),
    /// Print class counts, value range and Chi² eligibility.
    Validate {
        #[arg(long, short)]
        input: PathBuf,
    },
    /// Score features on the whole dataset and write the top-k masks.
    Select {
        /// chi2, mi or nca.
        #[arg(long)]
        method: SelectorKind,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Train one classifier on the whole dataset and save it.
    Fit {
        /// Mask file from `select`; all columns when absent.
        #[arg(long)]
        mask: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Predict labels with a saved model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, short)]
        input: PathBuf,
    },
    /// Cross-validate one (selector, k, classifier) cell.
    Evaluate {
        /// Run a single fold instead of all of them.
        #[arg(long)]
        fold: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Run the full selector × k × classifier grid.
    Grid {
        /// Reuse cached fold results from an earlier run into the same output directory.
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Render a report CSV as markdown.
    Report {
        #[arg(long, short)]
        input: PathBuf,
        /// Markdown destination; stdout when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthArgs {
    /// Destination (.sgvf, or .csv for the text form).
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub classes: usize,
    #[arg(long, default_value_t = 30)]
    pub per_class: usize,
    #[arg(long, default_value_t = 1280)]
    pub features: usize,
    #[arg(long, default_value_t = 64)]
    pub informative: usize,
    /// Minimum distance between class means.
    #[arg(long, default_value_t = 4.0)]
    pub separation: f64,
}

/// Writes to stderr and, once opened, to a log file.
struct Log {
    file: Mutex<Option<File>>,
}

impl Log {
    fn new() -> Self {
        Self { file: Mutex::new(None) }
    }

    fn open(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        *self.file.lock().unwrap() = Some(f);
        Ok(())
    }

    fn line(&self, msg: &str) {
        eprintln!("{msg}");
        if let Some(f) = self.file.lock().unwrap().as_mut() {
            let _ = writeln!(f, "{msg}");
        }
    }

    fn config<T: Serialize>(&self, what: &str, value: &T) {
        let json = serde_json::to_string(value).unwrap_or_else(|e| format!("<unserialisable: {e}>"));
        self.line(&format!("{what}: {json}"));
    }
}

/// Parses `argv` (including the program name) and runs it.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Error::Usage("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    let log = Log::new();
    log.line(&format!("jobs: {}", pool.current_num_threads()));
    pool.install(|| dispatch(cli.command, &log))
}

fn dispatch(cmd: Command, log: &Log) -> Result<()> {
    match cmd {
        Command::Synth(args) => synth(args, log),
        Command::Validate { input } => validate(&input),
        Command::Select { method, config, run } => select(method, run.resolve(config.as_deref())?, log),
        Command::Fit { mask, config, run } => fit_cmd(mask.as_deref(), run.resolve(config.as_deref())?, log),
        Command::Predict { model, input } => predict_cmd(&model, &input),
        Command::Evaluate { fold, config, run } => evaluate(fold, run.resolve(config.as_deref())?, log),
        Command::Grid { resume, config, run } => grid(resume, run.resolve(config.as_deref())?, log),
        Command::Report { input, output } => render(&input, output.as_deref()),
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn load_dataset(path: &Path) -> Result<EmbeddingDataset> {
    if is_csv(path) {
        textio::read_dataset_csv(path)
    } else {
        sgvf::read_embedding_file(path)
    }
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn synth(args: SynthArgs, log: &Log) -> Result<()> {
    log.config("synth config", &args);
    log.line(&format!("seed: {}", args.seed));
    let cfg = SynthConfig {
        n_classes: args.classes,
        per_class: args.per_class,
        p: args.features,
        informative: args.informative,
        separation: args.separation,
        seed: args.seed,
    };
    let ds = sigselect_core::generate_synthetic_dataset(&cfg)?;
    if is_csv(&args.output) {
        textio::write_dataset_csv(&ds, &args.output)
    } else {
        sgvf::write_embedding_file(&ds, &args.output)
    }
}

fn validate(input: &Path) -> Result<()> {
    let ds = load_dataset(input)?;
    let r = validate_dataset(&ds);
    println!("rows: {}", r.n_rows);
    println!("features: {}", r.n_features);
    println!("classes: {}", r.class_counts.len());
    let counts: Vec<String> = ds
        .class_names()
        .iter()
        .zip(&r.class_counts)
        .map(|(name, c)| format!("{name}={c}"))
        .collect();
    println!("class counts: {}", counts.join(" "));
    println!("balanced: {}", r.balanced);
    if !r.unbalanced_classes.is_empty() {
        let names: Vec<&str> = r.unbalanced_classes.iter().map(|&c| ds.class_names()[c].as_str()).collect();
        println!("classes off the modal count: {}", names.join(" "));
    }
    println!("value range: [{}, {}]", r.min_value, r.max_value);
    println!("negative values: {}", r.negative_count);
    if let Some((row, col)) = r.first_negative {
        println!("first negative: row {row}, column {col}");
    }
    println!("chi2 eligible: {}", r.chi2_eligible);
    Ok(())
}

/// Selector scores over every row: Chi² on raw features, MI and NCA on
/// standardised ones, as inside a fold.
fn full_scores(ds: &EmbeddingDataset, selector: SelectorKind, run: &RunConfig) -> Result<FeatureScores> {
    let x = ds.to_matrix();
    let y = ds.label_ids();
    let std = || Standardizer::fit(&x).transform(&x);
    Ok(match selector {
        SelectorKind::Chi2 => chi2_scores(&x, &y)?,
        SelectorKind::Mi => mi_scores(&std(), &y, &run.mi())?,
        SelectorKind::Nca => nca_fit(&std(), &y, &run.nca())?,
        SelectorKind::None => return Err(Error::Usage("selector none has no scores".into())),
    })
}

fn select(method: SelectorKind, run: RunConfig, log: &Log) -> Result<()> {
    let ds = load_dataset(run.input()?)?;
    let out = run.output()?.to_path_buf();
    log.config("select config", &run);
    log.line(&format!("seed: {}", run.seed.unwrap_or(0)));
    let scores = full_scores(&ds, method, &run)?;
    create_dir(&out)?;
    textio::write_scores(&scores, out.join(format!("scores_{method}.csv")))?;
    for &k in run.k.as_deref().unwrap_or(&[]) {
        textio::write_mask(&select_top_k(&scores, k)?, out.join(format!("{method}_{k}.txt")))?;
    }
    Ok(())
}

fn single<T: Copy>(what: &str, list: &Option<Vec<T>>, default: Option<T>) -> Result<T> {
    match list.as_deref() {
        Some([one]) => Ok(*one),
        None | Some([]) => default.ok_or_else(|| Error::Usage(format!("--{what} is required"))),
        Some(_) => Err(Error::Usage(format!("exactly one --{what} value expected"))),
    }
}

fn fit_cmd(mask: Option<&Path>, run: RunConfig, log: &Log) -> Result<()> {
    let ds = load_dataset(run.input()?)?;
    let family: Family = single("classifiers", &run.classifiers, None)?;
    let cfg = run.classifier(family);
    log.config("fit config", &run);
    log.line(&format!("seed: {}", run.seed.unwrap_or(0)));
    let x = ds.to_matrix();
    let mask = mask.map(|m| textio::read_mask(m, ds.n_features())).transpose()?;
    let x = match &mask {
        Some(m) => x.select_cols(m.indices()),
        None => x,
    };
    let standardizer = family.wants_standardized().then(|| Standardizer::fit(&x));
    let xs = standardizer.as_ref().map_or_else(|| x.clone(), |s| s.transform(&x));
    let classifier = fit(&cfg, &xs, &ds.label_ids())?;
    let bundle = ModelBundle { mask: mask.map(|m| m.indices().to_vec()), standardizer, classifier };
    save_model(&bundle, run.output()?)
}

fn predict_cmd(model: &Path, input: &Path) -> Result<()> {
    let bundle = load_model(model)?;
    let ds = load_dataset(input)?;
    let pred = bundle.predict(&ds.to_matrix())?;
    let names = ds.class_names();
    let mut out = String::from("row,label,predicted\n");
    let mut correct = 0usize;
    for (i, (&t, &p)) in ds.labels().iter().zip(&pred).enumerate() {
        correct += usize::from(t as usize == p);
        let pname = names.get(p).map_or_else(|| p.to_string(), Clone::clone);
        out.push_str(&format!("{i},{},{pname}\n", names[t as usize]));
    }
    print!("{out}");
    eprintln!("accuracy: {:.6}", correct as f64 / pred.len() as f64);
    Ok(())
}

fn evaluate(fold: Option<usize>, run: RunConfig, log: &Log) -> Result<()> {
    let ds = load_dataset(run.input()?)?;
    let selector = single("selectors", &run.selectors, Some(SelectorKind::None))?;
    let k = if selector == SelectorKind::None { None } else { Some(single("k", &run.k, None)?) };
    let family = single("classifiers", &run.classifiers, None)?;
    let cfg = run.classifier(family);
    let grid = run.grid();
    log.config("evaluate config", &run);
    log.line(&format!("seed: {}", grid.seed));
    let plan = make_stratified_folds(&ds.label_ids(), grid.n_folds, grid.seed)?;
    let settings = PipelineSettings { mi: grid.mi, nca: grid.nca, averaging: grid.averaging };
    let folds: Vec<usize> = match fold {
        Some(f) => vec![f],
        None => (0..plan.n_folds).collect(),
    };
    let mut rows = Vec::new();
    for f in folds {
        rows.push(run_pipeline_fold(&ds, &plan, f, selector, k, &cfg, &settings)?);
    }
    if fold.is_none() {
        let ms: Vec<_> = rows.iter().map(|r| r.metrics).collect();
        let mean = sigselect_core::evaluation::Metrics::mean(&ms);
        rows.push(MetricRow { fold: FoldTag::Mean, metrics: mean, ..rows[0] });
    }
    let text = report::to_csv(&ExperimentReport { rows });
    match &run.output {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn grid(resume: bool, run: RunConfig, log: &Log) -> Result<()> {
    let input = run.input()?.to_path_buf();
    let out = run.output()?.to_path_buf();
    let ds = load_dataset(&input)?;
    create_dir(&out)?;
    log.open(&out.join("log.txt"))?;
    let config = run.grid();
    log.line(&format!("input: {}", input.display()));
    log.config("grid config", &config);
    log.line(&format!("seed: {}", config.seed));
    let cache = DirCache::new(out.join("cache"), &ds, resume)?;
    log.line(&format!("cache: {} (resume: {resume})", cache.dir().display()));

    let progress = |msg: &str| log.line(msg);
    let report = run_experiment_grid_with(&ds, &config, &cache, &progress)?;
    report::write_report(&report, &out)?;
    log.line(&format!("wrote {} rows", report.rows.len()));

    let masks = out.join("masks");
    create_dir(&masks)?;
    let mut selectors = config.selectors.clone();
    selectors.sort_unstable();
    selectors.dedup();
    for s in selectors {
        let key = format!("full|{s}|{}", serde_json::to_string(&config.settings())?);
        let scores = match cache.load_scores(&key) {
            Some(sc) => sc,
            None => {
                let sc = full_scores(&ds, s, &run)?;
                cache.store_scores(&key, &sc);
                sc
            }
        };
        for &k in &config.ks {
            let mask: FeatureMask = select_top_k(&scores, k)?;
            textio::write_mask(&mask, masks.join(format!("{s}_{k}.txt")))?;
        }
        log.line(&format!("full-data {s} masks written"));
    }
    Ok(())
}

fn render(input: &Path, output: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(input).map_err(|e| Error::io(input, e))?;
    let md = report::to_markdown(&report::parse_csv(&text)?);
    match output {
        Some(p) => fs::write(p, md).map_err(|e| Error::io(p, e)),
        None => {
            print!("{md}");
            Ok(())
        }
    }
}

