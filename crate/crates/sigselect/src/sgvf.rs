//! SGVF binary embedding files.
//!
//! ```text
//! "SGVF" | version u16 = 1 | n u32 | p u32 | c u32
//! | c × { name_len u16 | UTF-8 name }
//! | labels u32[n]
//! | features f32[n × p], row-major
//! ```
//!
//! All integers and floats are little-endian. Readers reject trailing bytes.
//! The dataset's provenance tag is not stored; [`read_embedding_file`] sets
//! it to the source path.

use std::fs;
use std::path::Path;

use sigselect_core::EmbeddingDataset;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"SGVF";
pub const VERSION: u16 = 1;
/// Bytes before the class table.
pub const HEADER_LEN: usize = 18;

pub fn encode(dataset: &EmbeddingDataset) -> Result<Vec<u8>> {
    let (n, p) = (dataset.n_rows(), dataset.n_features());
    let mut out = Vec::with_capacity(HEADER_LEN + n * 4 + n * p * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for v in [n, p, dataset.n_classes()] {
        let v = u32::try_from(v).map_err(|_| Error::Data(format!("dimension {v} exceeds u32")))?;
        out.extend_from_slice(&v.to_le_bytes());
    }
    for name in dataset.class_names() {
        let len = u16::try_from(name.len())
            .map_err(|_| Error::Data(format!("class name longer than 65535 bytes: {name:.32}...")))?;
        out.extend_from_slice(&len.to_le_bytes());
        out.extend_from_slice(name.as_bytes());
    }
    for &l in dataset.labels() {
        out.extend_from_slice(&l.to_le_bytes());
    }
    for &v in dataset.features() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.buf.len()).ok_or(
            Error::Truncated { needed: self.pos.saturating_add(len), available: self.buf.len() },
        )?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

pub fn decode(bytes: &[u8], provenance: &str) -> Result<EmbeddingDataset> {
    let mut cur = Cursor { buf: bytes, pos: 0 };
    if cur.take(4)? != MAGIC {
        return Err(Error::Format("bad magic, expected \"SGVF\"".into()));
    }
    let version = cur.u16()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n = cur.u32()? as usize;
    let p = cur.u32()? as usize;
    let c = cur.u32()? as usize;
    if n == 0 || p == 0 || c < 2 {
        return Err(Error::Format(format!("invalid shape n={n} p={p} c={c}")));
    }
    let mut class_names = Vec::with_capacity(c.min(1 << 16));
    for k in 0..c {
        let len = cur.u16()? as usize;
        let raw = cur.take(len)?;
        let name = std::str::from_utf8(raw)
            .map_err(|_| Error::Format(format!("class name {k} is not UTF-8")))?;
        class_names.push(name.to_owned());
    }
    let payload = n
        .checked_mul(4)
        .and_then(|l| n.checked_mul(p)?.checked_mul(4)?.checked_add(l))
        .ok_or_else(|| Error::Format("declared size overflows".into()))?;
    let rest = cur.take(payload)?;
    if cur.pos != bytes.len() {
        return Err(Error::Format(format!("{} trailing bytes after payload", bytes.len() - cur.pos)));
    }
    let (label_bytes, feature_bytes) = rest.split_at(n * 4);
    let labels = label_bytes.chunks_exact(4).map(|b| u32::from_le_bytes(b.try_into().unwrap())).collect();
    let features: Vec<f32> =
        feature_bytes.chunks_exact(4).map(|b| f32::from_le_bytes(b.try_into().unwrap())).collect();
    EmbeddingDataset::new(features, n, p, labels, class_names, provenance).map_err(|e| match e {
        sigselect_core::Error::Data(m) => Error::Data(m),
        other => Error::Core(other),
    })
}

pub fn read_embedding_file(path: impl AsRef<Path>) -> Result<EmbeddingDataset> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes, &path.display().to_string())
}

pub fn write_embedding_file(dataset: &EmbeddingDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode(dataset)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
