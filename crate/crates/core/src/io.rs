//! File formats shared by the command-line tools.
//!
//! Embedding files are JSON objects `{"dim": d, "vectors": [[...], ...]}`
//! with optional `base`/`gamma_euc` (center sets) or `components` (mixture
//! samples). Numbers are written with 17 significant digits so that a
//! read/write cycle reproduces the file byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{CenterSet, EmbeddingVector};

/// 17-significant-digit scientific notation (lossless for `f64`).
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Validation(format!("cannot parse {s:?} as a number: {e}")))
}

/// Contents of an embedding file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingFile {
    pub dim: usize,
    pub vectors: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_euc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<usize>>,
}

impl EmbeddingFile {
    pub fn from_vectors(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vectors.first().map_or(0, Vec::len);
        let f = Self { dim, vectors, base: None, gamma_euc: None, components: None };
        f.validate()?;
        Ok(f)
    }

    pub fn from_embedding(e: &EmbeddingVector) -> Self {
        Self { dim: e.dim(), vectors: vec![e.as_slice().to_vec()], base: None, gamma_euc: None, components: None }
    }

    pub fn from_centers(cs: &CenterSet) -> Self {
        Self {
            dim: cs.dim(),
            vectors: (0..cs.n()).map(|i| cs.center(i)).collect(),
            base: Some(cs.base.as_slice().to_vec()),
            gamma_euc: Some(cs.gamma_euc),
            components: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Validation("dim must be >= 1".into()));
        }
        if let Some(i) = self.vectors.iter().position(|v| v.len() != self.dim) {
            return Err(Error::Validation(format!("vector {i} has length {} (dim {})", self.vectors[i].len(), self.dim)));
        }
        if let Some(b) = &self.base {
            if b.len() != self.dim {
                return Err(Error::Validation(format!("base has length {} (dim {})", b.len(), self.dim)));
            }
        }
        if let Some(c) = &self.components {
            if c.len() != self.vectors.len() {
                return Err(Error::Validation("components and vectors differ in length".into()));
            }
        }
        Ok(())
    }

    /// The single embedding of a one-vector file.
    pub fn single(&self) -> Result<EmbeddingVector> {
        match self.vectors.as_slice() {
            [v] => EmbeddingVector::new(v.clone()),
            _ => Err(Error::Validation(format!("expected exactly one vector, found {}", self.vectors.len()))),
        }
    }

    pub fn to_center_set(&self) -> Result<CenterSet> {
        let base = self.base.clone().ok_or_else(|| Error::Validation("center file lacks \"base\"".into()))?;
        let gamma_euc = self.gamma_euc.ok_or_else(|| Error::Validation("center file lacks \"gamma_euc\"".into()))?;
        if self.vectors.is_empty() {
            return Err(Error::Validation("center file has no centers".into()));
        }
        let n = self.vectors.len();
        Ok(CenterSet {
            centers: DMatrix::from_fn(n, self.dim, |i, j| self.vectors[i][j]),
            base: EmbeddingVector::new(base)?,
            gamma_euc,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{{\n  \"dim\": {},\n  \"vectors\": [", self.dim);
        for (i, v) in self.vectors.iter().enumerate() {
            s.push_str(if i == 0 { "\n    " } else { ",\n    " });
            s.push_str(&number_array(v));
        }
        s.push_str(if self.vectors.is_empty() { "]" } else { "\n  ]" });
        if let Some(b) = &self.base {
            let _ = write!(s, ",\n  \"base\": {}", number_array(b));
        }
        if let Some(g) = self.gamma_euc {
            let _ = write!(s, ",\n  \"gamma_euc\": {}", format_f64(g));
        }
        if let Some(c) = &self.components {
            let items: Vec<String> = c.iter().map(usize::to_string).collect();
            let _ = write!(s, ",\n  \"components\": [{}]", items.join(", "));
        }
        s.push_str("\n}\n");
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(text)?;
        f.validate()?;
        Ok(f)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

fn number_array(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|&x| format_f64(x)).collect();
    format!("[{}]", items.join(", "))
}
