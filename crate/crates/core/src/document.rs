//! JSON input documents.
//!
//! ```json
//! {"kind": "distribution", "probs": [0.5, 0.3333333333333333, 0.16666666666666666]}
//! {"kind": "density", "dim": 2, "matrix": {"re": [[0.5, 0.0], [0.0, 0.5]], "im": [[0.0, 0.0], [0.0, 0.0]]}}
//! {"kind": "basis", "label": "X", "matrix": {"re": [[...]], "im": [[...]]}}
//! ```
//!
//! Documents keep the payload exactly as written; conversion to the core
//! types validates and renormalizes. Parsing validates eagerly, so a
//! document that loads is always convertible.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::state::{CMatrix, DensityOperator, ObservableBasis, ProbDist};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("malformed document: {0}")]
    Shape(String),
    #[error("expected a {expected} document, found {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("invalid document: {0}")]
    Validation(#[from] crate::Error),
}

/// Real and imaginary parts, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixPayload {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixPayload {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        Self {
            re: rows(|z| z.re),
            im: Some(rows(|z| z.im)),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, DocumentError> {
        let n = self.re.len();
        let square = |part: &[Vec<f64>], name: &str| {
            if part.len() != n || part.iter().any(|row| row.len() != n) {
                Err(DocumentError::Shape(format!(
                    "`{name}` must be a square {n}x{n} array"
                )))
            } else {
                Ok(())
            }
        };
        if n == 0 {
            return Err(DocumentError::Shape("empty matrix".to_string()));
        }
        square(&self.re, "re")?;
        if let Some(im) = &self.im {
            square(im, "im")?;
        }
        Ok(CMatrix::from_fn(n, n, |r, c| {
            let im = self.im.as_ref().map_or(0.0, |im| im[r][c]);
            Complex64::new(self.re[r][c], im)
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InputDocument {
    Distribution {
        probs: Vec<f64>,
    },
    Density {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
        matrix: MatrixPayload,
    },
    Basis {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        matrix: MatrixPayload,
    },
}

/// Validated content of a document.
#[derive(Debug, Clone)]
pub enum Loaded {
    Distribution(ProbDist),
    Density(DensityOperator),
    Basis(ObservableBasis),
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: InputDocument = serde_json::from_str(text)?;
        doc.load()?;
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<(Self, Vec<u8>), DocumentError> {
        let bytes = std::fs::read(path).map_err(|source| DocumentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|e| DocumentError::Shape(format!("not UTF-8: {e}")))?;
        Ok((Self::parse(text)?, bytes))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Distribution { .. } => "distribution",
            Self::Density { .. } => "density",
            Self::Basis { .. } => "basis",
        }
    }

    pub fn from_distribution(p: &ProbDist) -> Self {
        Self::Distribution {
            probs: p.probs().to_vec(),
        }
    }

    pub fn from_density(rho: &DensityOperator) -> Self {
        Self::Density {
            dim: Some(rho.dim()),
            matrix: MatrixPayload::from_matrix(rho.matrix()),
        }
    }

    pub fn from_basis(basis: &ObservableBasis) -> Self {
        Self::Basis {
            dim: Some(basis.dim()),
            label: basis.label().map(str::to_string),
            matrix: MatrixPayload::from_matrix(basis.unitary()),
        }
    }

    fn checked_matrix(
        dim: Option<usize>,
        matrix: &MatrixPayload,
    ) -> Result<CMatrix, DocumentError> {
        let m = matrix.to_matrix()?;
        if let Some(dim) = dim {
            if dim != m.nrows() {
                return Err(DocumentError::Shape(format!(
                    "`dim` is {dim} but the matrix is {0}x{0}",
                    m.nrows()
                )));
            }
        }
        Ok(m)
    }

    pub fn load(&self) -> Result<Loaded, DocumentError> {
        Ok(match self {
            Self::Distribution { probs } => Loaded::Distribution(ProbDist::new(probs.clone())?),
            Self::Density { dim, matrix } => {
                Loaded::Density(DensityOperator::new(Self::checked_matrix(*dim, matrix)?)?)
            }
            Self::Basis { dim, label, matrix } => Loaded::Basis(ObservableBasis::from_unitary(
                Self::checked_matrix(*dim, matrix)?,
                label.clone(),
            )?),
        })
    }

    pub fn to_distribution(&self) -> Result<ProbDist, DocumentError> {
        match self.load()? {
            Loaded::Distribution(p) => Ok(p),
            _ => Err(DocumentError::WrongKind {
                expected: "distribution",
                found: self.kind(),
            }),
        }
    }

    pub fn to_density(&self) -> Result<DensityOperator, DocumentError> {
        match self.load()? {
            Loaded::Density(rho) => Ok(rho),
            _ => Err(DocumentError::WrongKind {
                expected: "density",
                found: self.kind(),
            }),
        }
    }

    pub fn to_basis(&self) -> Result<ObservableBasis, DocumentError> {
        match self.load()? {
            Loaded::Basis(b) => Ok(b),
            _ => Err(DocumentError::WrongKind {
                expected: "basis",
                found: self.kind(),
            }),
        }
    }
}
