//! Versioned binary blob for a fitted model and its preprocessing.
//!
//! ```text
//! "SGVM" | version u16 | family tag u8 | bincode(ModelBundle)
//! ```
//!
//! The payload layout follows the in-memory model types and is only
//! guaranteed to load in the version that wrote it.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sigselect_core::standardize::Standardizer;
use sigselect_core::{Family, Matrix, TrainedClassifier};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"SGVM";
pub const VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    /// Columns kept before standardisation, if a mask was applied.
    pub mask: Option<Vec<usize>>,
    pub standardizer: Option<Standardizer>,
    pub classifier: TrainedClassifier,
}

impl ModelBundle {
    /// Applies mask and standardiser, then predicts.
    pub fn predict(&self, x: &Matrix) -> Result<Vec<usize>> {
        let x = match &self.mask {
            Some(m) => x.select_cols(m),
            None => x.clone(),
        };
        let x = match &self.standardizer {
            Some(s) => s.transform(&x),
            None => x,
        };
        Ok(sigselect_core::predict(&self.classifier, &x)?)
    }
}

fn family_tag(f: Family) -> u8 {
    Family::ALL.iter().position(|&g| g == f).expect("known family") as u8
}

pub fn encode_model(bundle: &ModelBundle) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(family_tag(bundle.classifier.family()));
    let payload = bincode::serialize(bundle).map_err(|e| Error::Format(e.to_string()))?;
    out.extend_from_slice(&payload);
    Ok(out)
}

pub fn decode_model(bytes: &[u8]) -> Result<ModelBundle> {
    if bytes.len() < 7 || &bytes[..4] != MAGIC {
        return Err(Error::Format("not a model blob".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported model version {version}")));
    }
    let bundle: ModelBundle =
        bincode::deserialize(&bytes[7..]).map_err(|e| Error::Format(e.to_string()))?;
    if family_tag(bundle.classifier.family()) != bytes[6] {
        return Err(Error::Format("family tag does not match payload".into()));
    }
    Ok(bundle)
}

pub fn save_model(bundle: &ModelBundle, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_model(bundle)?).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelBundle> {
    let path = path.as_ref();
    decode_model(&fs::read(path).map_err(|e| Error::io(path, e))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sigselect_core::{fit, ClassifierConfig};

    #[test]
    fn blob_round_trip_for_every_family() {
        let x = Matrix::from_rows(&[[0.0, 1.0], [0.2, 0.8], [3.0, -1.0], [3.1, -0.7], [1.5, 4.0], [1.4, 4.2]]);
        let y = [0, 0, 1, 1, 2, 2];
        for f in Family::ALL {
            let classifier = fit(&ClassifierConfig::new(f), &x, &y).unwrap();
            let bundle = ModelBundle { mask: None, standardizer: None, classifier };
            let bytes = encode_model(&bundle).unwrap();
            assert_eq!(bytes[6], family_tag(f));
            let back = decode_model(&bytes).unwrap();
            assert_eq!(back.predict(&x).unwrap(), bundle.predict(&x).unwrap());
        }
    }

    #[test]
    fn rejects_foreign_bytes() {
        assert!(decode_model(b"SGVF\x01\x00\x00").is_err());
        assert!(decode_model(b"SG").is_err());
    }
}
