//! Experiment report serialisation: canonical CSV and a markdown rendering
//! laid out like the usual selector × k × classifier result tables.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sigselect_core::evaluation::{FoldTag, Metrics};
use sigselect_core::{ExperimentReport, Family, MetricRow, SelectorKind};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "selector,k,classifier,fold,accuracy,precision,recall,f1";

/// Published accuracies on the original 420-signer corpus, used only as
/// annotations next to measured values.
pub const REFERENCE_ACCURACY: &[(SelectorKind, Option<usize>, Family, f64)] = &[
    (SelectorKind::Nca, Some(300), Family::SvmRbf, 0.9770),
    (SelectorKind::None, None, Family::Lda, 0.922),
    (SelectorKind::Nca, Some(500), Family::Lda, 0.9310),
];

fn k_field(k: Option<usize>) -> String {
    k.map_or_else(|| "all".to_string(), |k| k.to_string())
}

fn fold_field(f: FoldTag) -> String {
    match f {
        FoldTag::Fold(i) => i.to_string(),
        FoldTag::Mean => "mean".to_string(),
    }
}

/// Canonical CSV text; metrics carry 6 decimals.
pub fn to_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let m = &r.metrics;
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{:.6},{:.6}",
            r.selector,
            k_field(r.k),
            r.classifier,
            fold_field(r.fold),
            m.accuracy,
            m.precision,
            m.recall,
            m.f1
        );
    }
    out
}

pub fn parse_csv(text: &str) -> Result<ExperimentReport> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Format(format!("unexpected report header {:?}", header.join(","))));
    }
    let mut rows = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec?;
        let bad = |what: &str| Error::Format(format!("report row {}: bad {what}", line + 1));
        let selector: SelectorKind = rec[0].parse().map_err(|_| bad("selector"))?;
        let k = match &rec[1] {
            "all" => None,
            s => Some(s.parse().map_err(|_| bad("k"))?),
        };
        let classifier: Family = rec[2].parse().map_err(|_| bad("classifier"))?;
        let fold = match &rec[3] {
            "mean" => FoldTag::Mean,
            s => FoldTag::Fold(s.parse().map_err(|_| bad("fold"))?),
        };
        let num = |i: usize| rec[i].parse::<f64>().map_err(|_| bad("metric"));
        let metrics = Metrics { accuracy: num(4)?, precision: num(5)?, recall: num(6)?, f1: num(7)? };
        rows.push(MetricRow { selector, k, classifier, fold, metrics });
    }
    Ok(ExperimentReport { rows })
}

fn pct(v: f64) -> String {
    format!("{:.2}", v * 100.0)
}

fn classifiers_in(report: &ExperimentReport) -> Vec<Family> {
    let set: BTreeSet<Family> = report.mean_rows().map(|r| r.classifier).collect();
    set.into_iter().collect()
}

const METRICS: [(&str, fn(&Metrics) -> f64); 4] = [
    ("accuracy", |m| m.accuracy),
    ("precision", |m| m.precision),
    ("recall", |m| m.recall),
    ("f1-score", |m| m.f1),
];

/// Markdown with one table for the baseline and one per selector, mean
/// rows only, values in percent.
pub fn to_markdown(report: &ExperimentReport) -> String {
    let families = classifiers_in(report);
    let mut out = String::from("# Cross-validated results\n\nMean over folds, in percent.\n");
    let head = |out: &mut String, lead: &str| {
        let names: Vec<&str> = families.iter().map(|f| f.as_str()).collect();
        let _ = writeln!(out, "| {lead} | {} |", names.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(families.len() + lead.matches('|').count() + 1));
    };
    let cell = |s, k, f| report.mean_of(s, k, f).map(|r| r.metrics);

    if report.mean_rows().any(|r| r.selector == SelectorKind::None) {
        out.push_str("\n## No feature selection\n\n");
        head(&mut out, "metric");
        for (name, get) in METRICS {
            let vals: Vec<String> = families
                .iter()
                .map(|&f| cell(SelectorKind::None, None, f).map_or("-".into(), |m| pct(get(&m))))
                .collect();
            let _ = writeln!(out, "| {name} | {} |", vals.join(" | "));
        }
    }

    for sel in [SelectorKind::Chi2, SelectorKind::Nca, SelectorKind::Mi] {
        let ks: BTreeSet<usize> =
            report.mean_rows().filter(|r| r.selector == sel).filter_map(|r| r.k).collect();
        if ks.is_empty() {
            continue;
        }
        let _ = write!(out, "\n## {sel}\n\n");
        head(&mut out, "k | metric");
        for &k in ks.iter().rev() {
            for (name, get) in METRICS {
                let vals: Vec<String> = families
                    .iter()
                    .map(|&f| cell(sel, Some(k), f).map_or("-".into(), |m| pct(get(&m))))
                    .collect();
                let _ = writeln!(out, "| {k} | {name} | {} |", vals.join(" | "));
            }
        }
    }

    let notes: Vec<String> = REFERENCE_ACCURACY
        .iter()
        .filter_map(|&(s, k, f, reference)| {
            cell(s, k, f).map(|m| {
                format!(
                    "- {s} / k={} / {f}: measured {}%, reference {}% (original private corpus, not reproducible here)",
                    k_field(k),
                    pct(m.accuracy),
                    pct(reference)
                )
            })
        })
        .collect();
    if !notes.is_empty() {
        out.push_str("\n## Reference accuracies\n\n");
        for n in notes {
            out.push_str(&n);
            out.push('\n');
        }
    }
    out
}

pub fn write_report(report: &ExperimentReport, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    let csv_path = dir.join("report.csv");
    fs::write(&csv_path, to_csv(report)).map_err(|e| Error::io(&csv_path, e))?;
    let md_path = dir.join("report.md");
    fs::write(&md_path, to_markdown(report)).map_err(|e| Error::io(&md_path, e))
}
