//! Plain-text side formats: the debugging CSV dataset, mask files and score lists.

use std::fs;
use std::io::Write;
use std::path::Path;

use sigselect_core::{EmbeddingDataset, FeatureMask, FeatureScores};

use crate::error::{Error, Result};

/// `label,f0,…,f{p−1}` with one row per sample; `label` is the class name.
pub fn write_dataset_csv(dataset: &EmbeddingDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["label".to_string()];
    header.extend((0..dataset.n_features()).map(|j| format!("f{j}")));
    w.write_record(&header)?;
    for i in 0..dataset.n_rows() {
        let mut rec = vec![dataset.class_names()[dataset.labels()[i] as usize].clone()];
        rec.extend(dataset.row(i).iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_dataset_csv(path: impl AsRef<Path>) -> Result<EmbeddingDataset> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.get(0) != Some("label") || header.len() < 2 {
        return Err(Error::Format("CSV header must be label,f0,...".into()));
    }
    let p = header.len() - 1;
    let mut names = Vec::new();
    let mut features = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        names.push(rec[0].to_string());
        for field in rec.iter().skip(1) {
            let v: f32 = field
                .trim()
                .parse()
                .map_err(|_| Error::Data(format!("row {line}: bad number {field:?}")))?;
            features.push(v);
        }
    }
    Ok(EmbeddingDataset::from_named_rows(&names, features, p, path.display().to_string())?)
}

/// One selected column index per line, ascending.
pub fn write_mask(mask: &FeatureMask, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = String::new();
    for i in mask.indices() {
        text.push_str(&i.to_string());
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_mask(path: impl AsRef<Path>, p: usize) -> Result<FeatureMask> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let idx = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().parse::<usize>().map_err(|_| Error::Format(format!("bad mask line {l:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureMask::new(idx, p)?)
}

/// `index,score` lines under a header.
pub fn write_scores(scores: &FeatureScores, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut text = format!("feature,{}\n", scores.method.as_str());
    for (j, s) in scores.scores.iter().enumerate() {
        text.push_str(&format!("{j},{s:e}\n"));
    }
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}
