use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sigselect::report::parse_csv;
use sigselect::sgvf::write_embedding_file;
use sigselect_core::evaluation::FoldTag;
use sigselect_core::EmbeddingDataset;

fn sigselect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigselect")).args(args).env_remove("SIGSELECT_JOBS").output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn small_synth(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("small.sgvf");
    let out = sigselect(&[
        "synth", "-o", s(&path), "--seed", "7", "--classes", "4", "--per-class", "10", "--features", "40",
        "--informative", "8",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn synth_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.sgvf");
    let b = dir.path().join("b.sgvf");
    for p in [&a, &b] {
        let out = sigselect(&["synth", "--seed", "7", "--classes", "3", "--features", "16", "--informative", "4", "-o", s(p)]);
        assert_eq!(out.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&out.stderr).contains("seed: 7"));
    }
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn grid_has_91_mean_rows_and_resume_matches() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_synth(dir.path());
    let out = dir.path().join("run");
    let args = ["grid", "--input", s(&input), "-o", s(&out), "--selectors", "nca,chi2,mi", "--k", "5,10,15,20", "--seed", "7"];
    let first = sigselect(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    let report = parse_csv(&csv).unwrap();
    assert_eq!(report.rows.iter().filter(|r| r.fold == FoldTag::Mean).count(), 91);
    assert_eq!(report.rows.len(), 91 * 6);
    for sel in ["chi2", "mi", "nca"] {
        for k in [5, 10, 15, 20] {
            let mask = fs::read_to_string(out.join("masks").join(format!("{sel}_{k}.txt"))).unwrap();
            assert_eq!(mask.lines().count(), k);
        }
    }
    let log = fs::read_to_string(out.join("log.txt")).unwrap();
    assert!(log.contains("seed: 7") && log.contains("grid config"));
    assert!(fs::read_to_string(out.join("report.md")).unwrap().contains("## nca"));

    // Drop the report and half the cache, as if interrupted, then resume.
    fs::remove_file(out.join("report.csv")).unwrap();
    let mut entries: Vec<_> = fs::read_dir(out.join("cache")).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for e in entries.iter().step_by(2) {
        fs::remove_file(e).unwrap();
    }
    let mut resumed = args.to_vec();
    resumed.push("--resume");
    assert!(sigselect(&resumed).status.success());
    assert_eq!(fs::read_to_string(out.join("report.csv")).unwrap(), csv);

    let jobs = sigselect(&[&args[..], &["--jobs", "2"]].concat());
    assert!(jobs.status.success());
    assert_eq!(fs::read_to_string(out.join("report.csv")).unwrap(), csv);
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_synth(dir.path());
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"selectors": ["chi2"], "k": [5], "classifiers": ["lda"], "seed": 1, "no_baseline": true}"#).unwrap();
    let out = dir.path().join("run");
    let r = sigselect(&["grid", "--config", s(&cfg), "-i", s(&input), "-o", s(&out), "--seed", "4"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6);
    assert!(csv.lines().skip(1).all(|l| l.starts_with("chi2,5,lda,")));
    assert!(String::from_utf8_lossy(&r.stderr).contains("seed: 4"));

    fs::write(&cfg, r#"{"seeed": 1}"#).unwrap();
    assert_eq!(sigselect(&["grid", "--config", s(&cfg), "-i", s(&input), "-o", s(&out)]).status.code(), Some(1));
}

#[test]
fn chi2_on_negative_data_names_the_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("neg.sgvf");
    let mut features = vec![1.0f32; 6 * 4];
    features[2 * 4 + 3] = -0.5;
    let ds = EmbeddingDataset::from_named_rows(&["a", "b", "a", "b", "a", "b"], features, 4, "").unwrap();
    write_embedding_file(&ds, &path).unwrap();
    let out = sigselect(&["select", "--method", "chi2", "-i", s(&path), "-o", s(&dir.path().join("sel"))]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("column 3"), "{err}");
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let out = sigselect(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(sigselect(&["grid", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(sigselect(&["--help"]).status.code(), Some(0));
    assert_eq!(sigselect(&["--version"]).status.code(), Some(0));
    assert_eq!(sigselect(&["validate", "-i", "/nonexistent.sgvf"]).status.code(), Some(2));
}

#[test]
fn select_fit_predict_evaluate_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let input = small_synth(dir.path());
    let sel = dir.path().join("sel");
    let out = sigselect(&["select", "--method", "nca", "-i", s(&input), "-o", s(&sel), "--k", "8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mask = sel.join("nca_8.txt");
    let scores = fs::read_to_string(sel.join("scores_nca.csv")).unwrap();
    assert_eq!(scores.lines().count(), 41);

    let model = dir.path().join("m.sgvm");
    let fit = sigselect(&["fit", "-i", s(&input), "--classifier", "svm_rbf", "--mask", s(&mask), "-o", s(&model)]);
    assert!(fit.status.success(), "{}", String::from_utf8_lossy(&fit.stderr));
    let pred = sigselect(&["predict", "--model", s(&model), "-i", s(&input)]);
    assert!(pred.status.success());
    let text = String::from_utf8(pred.stdout).unwrap();
    let agree = text.lines().skip(1).filter(|l| {
        let f: Vec<&str> = l.split(',').collect();
        f[1] == f[2]
    });
    assert!(agree.count() >= 36);

    let eval = sigselect(&["evaluate", "-i", s(&input), "--selector", "mi", "--k", "8", "--classifier", "knn"]);
    assert!(eval.status.success(), "{}", String::from_utf8_lossy(&eval.stderr));
    let csv = String::from_utf8(eval.stdout).unwrap();
    let report = parse_csv(&csv).unwrap();
    assert_eq!(report.rows.len(), 6);
    let csv_path = dir.path().join("eval.csv");
    fs::write(&csv_path, &csv).unwrap();
    let md = sigselect(&["report", "-i", s(&csv_path)]);
    assert!(String::from_utf8(md.stdout).unwrap().contains("| 8 | accuracy |"));

    let two = sigselect(&["evaluate", "-i", s(&input), "--classifier", "knn,lda"]);
    assert_eq!(two.status.code(), Some(1));

    let v = sigselect(&["validate", "-i", s(&input)]);
    assert!(String::from_utf8(v.stdout).unwrap().contains("chi2 eligible: true"));
}
