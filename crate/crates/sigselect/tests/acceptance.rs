//! Acceptance criteria. Each test prints one `[PASS]` or `[FAIL]` line to
//! the real stdout (bypassing the harness capture) and then asserts.
//! Reference values come from oracles written here, not from the library.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sigselect::cli::{run, Cli};
use sigselect::report::to_csv;
use sigselect_core::classifiers::{kkt_violation, smo_solve, Kernel, SmoParams};
use sigselect_core::evaluation::{
    fold_mask, prepare_fold, run_experiment_grid_with, GridCache, Metrics, PipelineSettings,
};
use sigselect_core::selectors::{mi_from_joint, nca_gradient, nca_objective, nca_optimize, quantile_bins};
use sigselect_core::{
    chi2_scores, compute_metrics, fit, generate_synthetic_dataset, make_stratified_folds, mi_scores, predict,
    select_top_k, Averaging, ClassifierConfig, ConfusionMatrix, ExperimentReport, Family, FeatureScores,
    GridConfig, Matrix, MiConfig, NcaConfig, ScoreMethod, SelectorKind, SynthConfig,
};

fn verdict(name: &str, ok: bool, detail: &str) {
    let line = format!("[{}] {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(ok, "{name}: {detail}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(r: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(r)
}

// ---------------------------------------------------------------------------
// Chi²
// ---------------------------------------------------------------------------

/// Expands each integer feature value into that many unit events, tallies
/// them per (class, feature) and applies the textbook statistic with
/// expected counts proportional to class size.
fn chi2_by_events(x: &[Vec<u32>], y: &[usize], classes: usize) -> Vec<f64> {
    let p = x[0].len();
    let mut events: Vec<(usize, usize)> = Vec::new();
    for (row, &c) in x.iter().zip(y) {
        for (r, &v) in row.iter().enumerate() {
            events.extend(std::iter::repeat_n((c, r), v as usize));
        }
    }
    let mut observed = vec![vec![0u64; p]; classes];
    for (c, r) in events {
        observed[c][r] += 1;
    }
    let n = y.len() as f64;
    let class_rows: Vec<f64> = (0..classes).map(|c| y.iter().filter(|&&l| l == c).count() as f64).collect();
    (0..p)
        .map(|r| {
            let total: u64 = (0..classes).map(|c| observed[c][r]).sum();
            if total == 0 {
                return 0.0;
            }
            (0..classes)
                .map(|c| {
                    let e = total as f64 * class_rows[c] / n;
                    let d = observed[c][r] as f64 - e;
                    d * d / e
                })
                .sum()
        })
        .collect()
}

#[test]
fn chi2_matches_event_enumeration_oracle() {
    let start = Instant::now();
    let mut r = rng(101);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = r.random_range(4..=40);
        let p = r.random_range(1..=8);
        let classes = r.random_range(2..=4.min(n));
        let mut y: Vec<usize> = (0..n).map(|i| i % classes).collect();
        for i in (1..n).rev() {
            y.swap(i, r.random_range(0..=i));
        }
        let x: Vec<Vec<u32>> = (0..n).map(|_| (0..p).map(|_| r.random_range(0..12)).collect()).collect();
        let m = Matrix::from_rows(&x.iter().map(|row| row.iter().map(|&v| v as f64).collect::<Vec<_>>()).collect::<Vec<_>>());
        let got = chi2_scores(&m, &y).unwrap().scores;
        let want = chi2_by_events(&x, &y, classes);
        for (a, b) in got.iter().zip(&want) {
            worst = worst.max((a - b).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        "chi2 oracle",
        worst < 1e-10 && secs < 5.0,
        &format!("50 datasets, max |err| = {worst:.2e}, {secs:.2} s"),
    );
}

// ---------------------------------------------------------------------------
// Mutual information
// ---------------------------------------------------------------------------

fn plug_in_mi(joint: &[Vec<u64>]) -> f64 {
    let total: u64 = joint.iter().flatten().sum();
    let t = total as f64;
    let rows: Vec<f64> = joint.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let cols: Vec<f64> = (0..joint[0].len()).map(|j| joint.iter().map(|r| r[j]).sum::<u64>() as f64).collect();
    let mut mi = 0.0;
    for (i, row) in joint.iter().enumerate() {
        for (j, &k) in row.iter().enumerate() {
            if k > 0 {
                let pxy = k as f64 / t;
                mi += pxy * (pxy / ((rows[i] / t) * (cols[j] / t))).ln();
            }
        }
    }
    mi
}

#[test]
fn mi_hand_values_and_non_negativity() {
    let perfect = mi_from_joint(&[vec![7, 0], vec![0, 7]]);
    let independent = mi_from_joint(&[vec![2, 4], vec![3, 6]]);
    let ln2 = std::f64::consts::LN_2;
    let column_is_label = Matrix::from_vec(10, 1, (0..10).map(|i| (i % 2) as f64).collect()).unwrap();
    let labels: Vec<usize> = (0..10).map(|i| i % 2).collect();
    let via_scores = mi_scores(&column_is_label, &labels, &MiConfig::default()).unwrap().scores[0];
    let hand_ok = (perfect - ln2).abs() < 1e-12 && independent.abs() < 1e-12 && (via_scores - ln2).abs() < 1e-12;

    let mut r = rng(202);
    let mut negatives = 0usize;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = r.random_range(6..=50);
        let p = r.random_range(1..=4);
        let classes = r.random_range(2..=4);
        let y: Vec<usize> = (0..n).map(|i| if i < classes { i } else { r.random_range(0..classes) }).collect();
        let levels = r.random_range(1..=6);
        let x = Matrix::from_vec(n, p, (0..n * p).map(|_| r.random_range(0..levels) as f64).collect()).unwrap();
        let bins = r.random_range(2..=10);
        let scores = mi_scores(&x, &y, &MiConfig { bins }).unwrap().scores;
        for (j, &s) in scores.iter().enumerate() {
            negatives += usize::from(s < 0.0);
            let b = quantile_bins(&x.column(j), bins);
            let width = b.iter().max().unwrap() + 1;
            let mut joint = vec![vec![0u64; classes]; width];
            for (&bin, &c) in b.iter().zip(&y) {
                joint[bin][c] += 1;
            }
            worst = worst.max((plug_in_mi(&joint).max(0.0) - s).abs());
        }
    }
    verdict(
        "mi oracle",
        hand_ok && negatives == 0 && worst < 1e-12,
        &format!(
            "perfect {perfect:.15} (ln 2 {ln2:.15}), independent {independent:.1e}, column=label {via_scores:.15}; \
             1000 datasets: {negatives} negative, max |err| vs plug-in {worst:.1e}"
        ),
    );
}

// ---------------------------------------------------------------------------
// NCA
// ---------------------------------------------------------------------------

#[test]
fn nca_gradient_check_and_monotone_objective() {
    let mut r = rng(303);
    let cfg = NcaConfig::default();
    let h = 1e-5;
    let mut worst = 0.0f64;
    let mut points = 0;
    let mut monotone = true;
    for _ in 0..8 {
        let (n, p) = (20, 5);
        let x = Matrix::from_vec(n, p, (0..n * p).map(|_| gaussian(&mut r)).collect()).unwrap();
        let y: Vec<usize> = (0..n).map(|i| i % 3).collect();
        let w: Vec<f64> = (0..p).map(|_| r.random_range(0.2..1.5)).collect();
        let g = nca_gradient(&x, &y, &w, &cfg).unwrap();
        for k in 0..p {
            let (mut up, mut down) = (w.clone(), w.clone());
            up[k] += h;
            down[k] -= h;
            let fd = (nca_objective(&x, &y, &up, &cfg).unwrap() - nca_objective(&x, &y, &down, &cfg).unwrap()) / (2.0 * h);
            worst = worst.max((fd - g[k]).abs() / fd.abs().max(g[k].abs()).max(1e-8));
        }
        points += 1;
        let fit = nca_optimize(&x, &y, &cfg).unwrap();
        monotone &= fit.objective_trace.windows(2).all(|t| t[1] >= t[0]);
    }
    verdict(
        "nca gradient",
        points >= 5 && worst < 1e-4 && monotone,
        &format!("{points} points (n=20, p=5), max rel err {worst:.2e}, objective monotone on every run: {monotone}"),
    );
}

// ---------------------------------------------------------------------------
// SMO
// ---------------------------------------------------------------------------

fn gram(x: &Matrix, k: Kernel) -> Matrix {
    let m = x.rows();
    let mut g = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            g.set(i, j, k.eval(x.row(i), x.row(j)));
        }
    }
    g
}

fn train_sign(g: &Matrix, y: &[f64], alpha: &[f64], bias: f64) -> Vec<f64> {
    (0..y.len())
        .map(|t| {
            let f: f64 = (0..y.len()).map(|s| alpha[s] * y[s] * g.get(s, t)).sum::<f64>() + bias;
            if f >= 0.0 { 1.0 } else { -1.0 }
        })
        .collect()
}

#[test]
fn smo_kkt_equality_separable_and_xor() {
    let mut r = rng(404);
    let params = SmoParams::default();
    let (mut worst_kkt, mut worst_eq) = (0.0f64, 0.0f64);
    let mut unconverged = 0;
    for t in 0..100 {
        let m = r.random_range(4..=60);
        let p = r.random_range(1..=4);
        let x = Matrix::from_vec(m, p, (0..m * p).map(|_| gaussian(&mut r)).collect()).unwrap();
        let mut y: Vec<f64> = (0..m).map(|_| if r.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
        y[0] = 1.0;
        y[1] = -1.0;
        let kernel = match t % 3 {
            0 => Kernel::Rbf { gamma: r.random_range(0.1..2.0) },
            1 => Kernel::Linear,
            _ => Kernel::Poly { gamma: 0.5, degree: 2, coef0: 1.0 },
        };
        let c = r.random_range(0.1..10.0);
        let g = gram(&x, kernel);
        let sol = smo_solve(&g, &y, &SmoParams { c, ..params }).unwrap();
        unconverged += usize::from(!sol.converged);
        worst_kkt = worst_kkt.max(kkt_violation(&g, &y, &sol.alpha, sol.bias, c));
        worst_eq = worst_eq.max(sol.alpha.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>().abs());
    }

    let mut separable_ok = true;
    for s in 0..10 {
        let mut r = rng(500 + s);
        let m = 30;
        let x = Matrix::from_vec(m, 2, (0..2 * m).map(|_| r.random_range(-1.0..1.0)).collect()).unwrap();
        let y: Vec<f64> = (0..m)
            .map(|i| if x.get(i, 0) + 0.5 * x.get(i, 1) > 0.0 { 1.0 } else { -1.0 })
            .collect();
        let x = Matrix::from_rows(
            &(0..m).map(|i| vec![x.get(i, 0) + 0.3 * y[i], x.get(i, 1) + 0.15 * y[i]]).collect::<Vec<_>>(),
        );
        let g = gram(&x, Kernel::Linear);
        let sol = smo_solve(&g, &y, &SmoParams { c: 1000.0, ..params }).unwrap();
        separable_ok &= train_sign(&g, &y, &sol.alpha, sol.bias) == y;
    }

    let xor = Matrix::from_rows(&[[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]]);
    let yx = [1.0, 1.0, -1.0, -1.0];
    let g = gram(&xor, Kernel::Rbf { gamma: 1.0 });
    let sol = smo_solve(&g, &yx, &SmoParams { c: 10.0, ..params }).unwrap();
    let xor_ok = train_sign(&g, &yx, &sol.alpha, sol.bias) == yx;

    verdict(
        "smo",
        worst_kkt < params.tol && worst_eq < 1e-8 && unconverged == 0 && separable_ok && xor_ok,
        &format!(
            "100 problems: max KKT {worst_kkt:.2e} (tol {}), max |Σαy| {worst_eq:.1e}, unconverged {unconverged}; \
             separable toys 100%: {separable_ok}; rbf XOR: {xor_ok}",
            params.tol
        ),
    );
}

// ---------------------------------------------------------------------------
// LDA / GNB
// ---------------------------------------------------------------------------

/// Gauss-Jordan inverse with partial pivoting.
fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
        m.swap(col, piv);
        let d = m[col][col];
        m[col].iter_mut().for_each(|v| *v /= d);
        for i in 0..n {
            if i != col {
                let f = m[i][col];
                let pivot_row = m[col].clone();
                m[i].iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

struct Toy {
    x: Vec<Vec<f64>>,
    y: Vec<usize>,
    probes: Vec<Vec<f64>>,
    classes: usize,
}

fn toy(seed: u64, classes: usize, p: usize) -> Toy {
    let mut r = rng(seed);
    let means: Vec<Vec<f64>> = (0..classes).map(|_| (0..p).map(|_| 3.0 * gaussian(&mut r)).collect()).collect();
    let mix: Vec<Vec<f64>> = (0..p).map(|_| (0..p).map(|_| 0.6 * gaussian(&mut r)).collect()).collect();
    let sample = |c: usize, r: &mut ChaCha8Rng| -> Vec<f64> {
        let z: Vec<f64> = (0..p).map(|_| gaussian(r)).collect();
        (0..p).map(|i| means[c][i] + z[i] + (0..p).map(|j| mix[i][j] * z[j]).sum::<f64>()).collect()
    };
    let mut x = Vec::new();
    let mut y = Vec::new();
    for c in 0..classes {
        for _ in 0..(12 + 4 * c) {
            x.push(sample(c, &mut r));
            y.push(c);
        }
    }
    let probes = (0..200).map(|i| sample(i % classes, &mut r)).collect();
    Toy { x, y, probes, classes }
}

fn class_stats(t: &Toy) -> (Vec<f64>, Vec<Vec<f64>>) {
    let p = t.x[0].len();
    let counts: Vec<f64> = (0..t.classes).map(|c| t.y.iter().filter(|&&l| l == c).count() as f64).collect();
    let mut means = vec![vec![0.0; p]; t.classes];
    for (row, &c) in t.x.iter().zip(&t.y) {
        for j in 0..p {
            means[c][j] += row[j] / counts[c];
        }
    }
    (counts, means)
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in v.iter().enumerate() {
        if s > v[best] {
            best = i;
        }
    }
    best
}

fn lda_oracle(t: &Toy) -> Vec<usize> {
    let p = t.x[0].len();
    let n = t.x.len() as f64;
    let (counts, means) = class_stats(t);
    let mut cov = vec![vec![0.0; p]; p];
    for (row, &c) in t.x.iter().zip(&t.y) {
        for i in 0..p {
            for j in 0..p {
                cov[i][j] += (row[i] - means[c][i]) * (row[j] - means[c][j]) / (n - t.classes as f64);
            }
        }
    }
    let inv = invert(&cov);
    let coef: Vec<Vec<f64>> =
        means.iter().map(|m| (0..p).map(|i| (0..p).map(|j| inv[i][j] * m[j]).sum()).collect()).collect();
    t.probes
        .iter()
        .map(|x| {
            let scores: Vec<f64> = (0..t.classes)
                .map(|c| {
                    let a: f64 = (0..p).map(|i| coef[c][i] * x[i]).sum();
                    let b: f64 = (0..p).map(|i| coef[c][i] * means[c][i]).sum();
                    a - 0.5 * b + (counts[c] / n).ln()
                })
                .collect();
            argmax(&scores)
        })
        .collect()
}

fn gnb_oracle(t: &Toy, var_smoothing: f64) -> Vec<usize> {
    let p = t.x[0].len();
    let n = t.x.len() as f64;
    let (counts, means) = class_stats(t);
    let mut vars = vec![vec![0.0; p]; t.classes];
    for (row, &c) in t.x.iter().zip(&t.y) {
        for j in 0..p {
            vars[c][j] += (row[j] - means[c][j]).powi(2) / counts[c];
        }
    }
    let max_var = (0..p)
        .map(|j| {
            let mu = t.x.iter().map(|r| r[j]).sum::<f64>() / n;
            t.x.iter().map(|r| (r[j] - mu).powi(2)).sum::<f64>() / n
        })
        .fold(0.0, f64::max);
    let eps = var_smoothing * max_var;
    t.probes
        .iter()
        .map(|x| {
            let scores: Vec<f64> = (0..t.classes)
                .map(|c| {
                    (counts[c] / n).ln()
                        - 0.5
                            * (0..p)
                                .map(|j| {
                                    let v = vars[c][j] + eps;
                                    (2.0 * std::f64::consts::PI * v).ln() + (x[j] - means[c][j]).powi(2) / v
                                })
                                .sum::<f64>()
                })
                .collect();
            argmax(&scores)
        })
        .collect()
}

#[test]
fn lda_and_gnb_match_dense_oracles() {
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for (seed, classes) in (0..20u64).map(|s| (600 + s, 2 + (s as usize % 2))) {
        let t = toy(seed, classes, 3);
        let x = Matrix::from_rows(&t.x);
        let probes = Matrix::from_rows(&t.probes);
        for f in [Family::Lda, Family::Gnb] {
            let cfg = ClassifierConfig::new(f);
            let got = predict(&fit(&cfg, &x, &t.y).unwrap(), &probes).unwrap();
            let want = if f == Family::Lda { lda_oracle(&t) } else { gnb_oracle(&t, cfg.gnb.var_smoothing) };
            mismatches += got.iter().zip(&want).filter(|(a, b)| a != b).count();
            checked += got.len();
        }
    }
    verdict(
        "lda/gnb oracles",
        mismatches == 0,
        &format!("20 toys (2 and 3 classes), {checked} predictions, {mismatches} disagreements"),
    );
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

#[test]
fn weighted_recall_equals_accuracy() {
    let mut r = rng(707);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let c = r.random_range(2..=12);
        let rows: Vec<Vec<u64>> = (0..c)
            .map(|i| {
                let mut row: Vec<u64> = (0..c).map(|_| r.random_range(0..30)).collect();
                row[i] += 1;
                row
            })
            .collect();
        let cm = ConfusionMatrix::from_rows(&rows).unwrap();
        let m = compute_metrics(&cm, Averaging::Weighted).unwrap();
        let acc = (0..c).map(|i| rows[i][i]).sum::<u64>() as f64 / rows.iter().flatten().sum::<u64>() as f64;
        worst = worst.max((m.recall - m.accuracy).abs()).max((m.accuracy - acc).abs());
    }
    verdict("metric identity", worst < 1e-12, &format!("1000 matrices, max |recall - accuracy| = {worst:.1e}"));
}

// ---------------------------------------------------------------------------
// Folds and leakage
// ---------------------------------------------------------------------------

#[test]
fn folds_are_exact_and_leak_free() {
    let cfg = SynthConfig { p: 40, informative: 8, ..SynthConfig::default() };
    let ds = generate_synthetic_dataset(&cfg).unwrap();
    let labels = ds.label_ids();
    let plan = make_stratified_folds(&labels, 5, 7).unwrap();
    let mut cells_ok = true;
    let mut seen = vec![0usize; labels.len()];
    for f in 0..5 {
        let test = plan.test_indices(f);
        test.iter().for_each(|&i| seen[i] += 1);
        for c in 0..cfg.n_classes {
            cells_ok &= test.iter().filter(|&&i| labels[i] == c).count() == 6;
        }
    }
    let partition_ok = seen.iter().all(|&s| s == 1);

    let settings = PipelineSettings::default();
    let mut leak_free = true;
    for f in [0, 3] {
        let mut features = ds.features().to_vec();
        for &i in &plan.test_indices(f) {
            features[i * cfg.p..(i + 1) * cfg.p].iter_mut().enumerate().for_each(|(j, v)| *v = *v * 5.0 + j as f32);
        }
        let perturbed = sigselect_core::EmbeddingDataset::new(
            features,
            ds.n_rows(),
            cfg.p,
            ds.labels().to_vec(),
            ds.class_names().to_vec(),
            "perturbed",
        )
        .unwrap();
        let a = prepare_fold(&ds, &plan, f).unwrap();
        let b = prepare_fold(&perturbed, &plan, f).unwrap();
        leak_free &= a.standardizer == b.standardizer;
        for s in [SelectorKind::Chi2, SelectorKind::Mi, SelectorKind::Nca] {
            for k in [4, 8, 16] {
                leak_free &= fold_mask(&a, s, Some(k), &settings).unwrap() == fold_mask(&b, s, Some(k), &settings).unwrap();
            }
        }
    }
    verdict(
        "fold integrity",
        cells_ok && partition_ok && leak_free,
        &format!("every (class, fold) has 6 rows: {cells_ok}; partition: {partition_ok}; leakage guard: {leak_free}"),
    );
}

// ---------------------------------------------------------------------------
// End-to-end synthetic grid
// ---------------------------------------------------------------------------

/// Keeps every per-fold score vector the grid computes; never serves hits.
#[derive(Default)]
struct ScoreRecorder(Mutex<Vec<FeatureScores>>);

impl GridCache for ScoreRecorder {
    fn load_scores(&self, _: &str) -> Option<FeatureScores> {
        None
    }
    fn store_scores(&self, _: &str, scores: &FeatureScores) {
        self.0.lock().unwrap().push(scores.clone());
    }
    fn load_metrics(&self, _: &str) -> Option<Metrics> {
        None
    }
    fn store_metrics(&self, _: &str, _: &Metrics) {}
}

struct GridRun {
    report: ExperimentReport,
    scores: Vec<FeatureScores>,
    elapsed: Duration,
}

fn grid_config() -> GridConfig {
    GridConfig { seed: 7, ..GridConfig::default() }
}

fn shared_grid() -> &'static GridRun {
    static RUN: OnceLock<GridRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let ds = generate_synthetic_dataset(&SynthConfig::default()).unwrap();
        let recorder = ScoreRecorder::default();
        let start = Instant::now();
        let report = run_experiment_grid_with(&ds, &grid_config(), &recorder, &|_| {}).unwrap();
        let elapsed = start.elapsed();
        GridRun { report, scores: recorder.0.into_inner().unwrap(), elapsed }
    })
}

#[test]
fn synthetic_grid_accuracy_recoverability_and_time() {
    let run = shared_grid();
    let mut low = Vec::new();
    let mut min_acc = f64::INFINITY;
    for s in [SelectorKind::Nca, SelectorKind::Chi2, SelectorKind::Mi] {
        for k in [200, 300, 400, 500] {
            for f in [Family::SvmRbf, Family::SvmLinear, Family::Lda, Family::Knn] {
                let acc = run.report.mean_of(s, Some(k), f).map_or(0.0, |r| r.metrics.accuracy);
                min_acc = min_acc.min(acc);
                if acc < 0.90 {
                    low.push(format!("{s}/{k}/{f}={acc:.4}"));
                }
            }
        }
    }
    let informative = SynthConfig::default().informative;
    let mut worst: BTreeMap<&str, f64> = BTreeMap::new();
    for sc in &run.scores {
        let top = select_top_k(sc, informative).unwrap();
        let hit = top.indices().iter().filter(|&&j| j < informative).count() as f64 / informative as f64;
        let e = worst.entry(sc.method.as_str()).or_insert(1.0);
        *e = e.min(hit);
    }
    let methods_seen = [ScoreMethod::Chi2, ScoreMethod::Mi, ScoreMethod::Nca]
        .iter()
        .all(|m| worst.contains_key(m.as_str()));
    let recover_ok = methods_seen && worst.values().all(|&v| v >= 0.8);
    let mean_rows = run.report.mean_rows().count();
    let minutes = run.elapsed.as_secs_f64() / 60.0;
    verdict(
        "synthetic grid",
        low.is_empty() && recover_ok && mean_rows == 91 && minutes < 10.0,
        &format!(
            "{mean_rows} mean rows in {minutes:.2} min; 48 target cells min accuracy {min_acc:.4}{}; \
             worst top-{informative} recoverability per selector over {} fold runs: {worst:?}",
            if low.is_empty() { String::new() } else { format!(", below 0.90: {}", low.join(" ")) },
            run.scores.len()
        ),
    );
}

#[test]
fn grid_runs_are_byte_identical() {
    let first = to_csv(&shared_grid().report);
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("synth.sgvf");
    let out = dir.path().join("grid");
    let argv = |rest: &[&str]| {
        let mut v = vec!["sigselect"];
        v.extend_from_slice(rest);
        Cli::try_parse_from(v).unwrap()
    };
    run(argv(&["synth", "--seed", "7", "-o", input.to_str().unwrap()])).unwrap();
    run(argv(&["grid", "-i", input.to_str().unwrap(), "-o", out.to_str().unwrap(), "--seed", "7"])).unwrap();
    let second = std::fs::read_to_string(out.join("report.csv")).unwrap();
    let diff = first.lines().zip(second.lines()).filter(|(a, b)| a != b).count();
    verdict(
        "determinism",
        first == second,
        &format!(
            "library run vs CLI run: {} vs {} bytes, {diff} differing lines",
            first.len(),
            second.len()
        ),
    );
}
