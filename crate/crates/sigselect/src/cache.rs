//! On-disk grid cache. Entries are JSON files named by
//! sha256(dataset digest, key), so caches for different datasets can share
//! one directory. Writes go through a temp file and a rename.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};
use sigselect_core::evaluation::{GridCache, Metrics};
use sigselect_core::{EmbeddingDataset, FeatureScores};

use crate::error::{Error, Result};
use crate::sgvf;

pub fn dataset_digest(ds: &EmbeddingDataset) -> Result<String> {
    Ok(hex::encode(Sha256::digest(sgvf::encode(ds)?)))
}

pub struct DirCache {
    dir: PathBuf,
    digest: String,
    read: bool,
}

impl DirCache {
    /// `read = false` makes the cache write-only (fresh run that still
    /// leaves resumable state behind).
    pub fn new(dir: impl Into<PathBuf>, ds: &EmbeddingDataset, read: bool) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Self { dir, digest: dataset_digest(ds)?, read })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, kind: &str, key: &str) -> PathBuf {
        let mut h = Sha256::new();
        h.update(self.digest.as_bytes());
        h.update([0u8]);
        h.update(kind.as_bytes());
        h.update([0u8]);
        h.update(key.as_bytes());
        self.dir.join(format!("{}.json", hex::encode(h.finalize())))
    }

    fn load<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Option<T> {
        if !self.read {
            return None;
        }
        let bytes = fs::read(self.path(kind, key)).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    // Cache failures are not fatal: the value is simply recomputed next time.
    fn store<T: Serialize>(&self, kind: &str, key: &str, value: &T) {
        let path = self.path(kind, key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let Ok(bytes) = serde_json::to_vec(value) else { return };
        if fs::write(&tmp, bytes).is_ok() && fs::rename(&tmp, &path).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }
}

impl GridCache for DirCache {
    fn load_scores(&self, key: &str) -> Option<FeatureScores> {
        self.load("scores", key)
    }
    fn store_scores(&self, key: &str, scores: &FeatureScores) {
        self.store("scores", key, scores)
    }
    fn load_metrics(&self, key: &str) -> Option<Metrics> {
        self.load("metrics", key)
    }
    fn store_metrics(&self, key: &str, metrics: &Metrics) {
        self.store("metrics", key, metrics)
    }
}
