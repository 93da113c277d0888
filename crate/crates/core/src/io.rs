//! JSON file format for states, measurements, unitaries and Naimark extensions.
//!
//! A matrix file looks like
//!
//! ```json
//! { "kind": "povm", "dim": 2, "data": [ [[[1,0],[0,0]], [[0,0],[0,0]]], ... ] }
//! ```
//!
//! Complex entries are `[re, im]` pairs; matrices are arrays of rows. `state`
//! and `unitary` files hold a single matrix in `data`, `povm` and
//! `projective` files a list of matrices. A Naimark extension is stored as a
//! bundle with kind `naimark_extension` wrapping a `projective` file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{validate_povm, validate_projective, DensityMatrix, Povm, ProjectiveMeasurement};
use crate::naimark::{Embedding, NaimarkExtension};
use crate::qmat::{c64, ComplexMatrix};

type Rows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    State,
    Povm,
    Projective,
    Unitary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixData {
    Single(Rows),
    List(Vec<Rows>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub dim: usize,
    pub data: MatrixData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn from_rows(rows: &Rows, dim: usize) -> Result<ComplexMatrix> {
    if rows.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rows.len(),
        });
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| c64(rows[i][j][0], rows[i][j][1])))
}

impl MatrixFile {
    fn single(kind: MatrixKind, m: &ComplexMatrix) -> Self {
        Self {
            kind,
            dim: m.nrows(),
            data: MatrixData::Single(to_rows(m)),
            labels: None,
        }
    }

    fn list(kind: MatrixKind, dim: usize, ms: &[ComplexMatrix]) -> Self {
        Self {
            kind,
            dim,
            data: MatrixData::List(ms.iter().map(to_rows).collect()),
            labels: None,
        }
    }

    pub fn from_state(rho: &DensityMatrix) -> Self {
        Self::single(MatrixKind::State, rho.matrix())
    }

    pub fn from_unitary(u: &ComplexMatrix) -> Self {
        Self::single(MatrixKind::Unitary, u)
    }

    pub fn from_povm(povm: &Povm) -> Self {
        Self::list(MatrixKind::Povm, povm.dim(), povm.effects())
    }

    pub fn from_projective(p: &ProjectiveMeasurement) -> Self {
        Self::list(MatrixKind::Projective, p.dim(), p.projectors())
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix files always serialize")
    }

    fn expect_kind(&self, kind: MatrixKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Format(format!("expected kind {kind:?}, found {:?}", self.kind)));
        }
        Ok(())
    }

    fn single_matrix(&self) -> Result<ComplexMatrix> {
        match &self.data {
            MatrixData::Single(rows) => from_rows(rows, self.dim),
            MatrixData::List(_) => Err(Error::Format("expected a single matrix in `data`".into())),
        }
    }

    fn matrix_list(&self) -> Result<Vec<ComplexMatrix>> {
        let list = match &self.data {
            MatrixData::List(list) => list,
            MatrixData::Single(_) => return Err(Error::Format("expected a list of matrices in `data`".into())),
        };
        if let Some(labels) = &self.labels {
            if labels.len() != list.len() {
                return Err(Error::DimensionMismatch {
                    expected: list.len(),
                    found: labels.len(),
                });
            }
        }
        list.iter().map(|rows| from_rows(rows, self.dim)).collect()
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        self.expect_kind(MatrixKind::State)?;
        DensityMatrix::new(self.single_matrix()?)
    }

    pub fn to_unitary(&self) -> Result<ComplexMatrix> {
        self.expect_kind(MatrixKind::Unitary)?;
        self.single_matrix()
    }

    pub fn to_povm(&self) -> Result<Povm> {
        self.expect_kind(MatrixKind::Povm)?;
        validate_povm(self.matrix_list()?)
    }

    pub fn to_projective(&self) -> Result<ProjectiveMeasurement> {
        self.expect_kind(MatrixKind::Projective)?;
        validate_projective(self.matrix_list()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EmbeddingSpec {
    DirectSum { target_dim: usize },
    Ancilla { ancilla_dim: usize, reference: usize },
}

impl From<Embedding> for EmbeddingSpec {
    fn from(e: Embedding) -> Self {
        match e {
            Embedding::DirectSum { target_dim } => EmbeddingSpec::DirectSum { target_dim },
            Embedding::Ancilla { ancilla_dim, reference } => EmbeddingSpec::Ancilla { ancilla_dim, reference },
        }
    }
}

impl From<EmbeddingSpec> for Embedding {
    fn from(e: EmbeddingSpec) -> Self {
        match e {
            EmbeddingSpec::DirectSum { target_dim } => Embedding::DirectSum { target_dim },
            EmbeddingSpec::Ancilla { ancilla_dim, reference } => Embedding::Ancilla { ancilla_dim, reference },
        }
    }
}

/// Serialized Naimark extension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaimarkFile {
    pub kind: String,
    pub source_dim: usize,
    pub embedding: EmbeddingSpec,
    pub measurement: MatrixFile,
}

pub const NAIMARK_KIND: &str = "naimark_extension";

impl NaimarkFile {
    pub fn from_extension(ext: &NaimarkExtension) -> Self {
        Self {
            kind: NAIMARK_KIND.into(),
            source_dim: ext.source_dim,
            embedding: ext.embedding.into(),
            measurement: MatrixFile::from_projective(&ext.measurement),
        }
    }

    pub fn to_extension(&self) -> Result<NaimarkExtension> {
        if self.kind != NAIMARK_KIND {
            return Err(Error::Format(format!("expected kind {NAIMARK_KIND}, found {}", self.kind)));
        }
        NaimarkExtension::new(self.measurement.to_projective()?, self.embedding.into(), self.source_dim)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("naimark files always serialize")
    }
}

/// A projective measurement as read from disk, with its extension metadata
/// when the file was a Naimark bundle.
#[derive(Debug, Clone)]
pub struct LoadedMeasurement {
    pub measurement: ProjectiveMeasurement,
    pub extension: Option<NaimarkExtension>,
}

/// Parses either a `projective` matrix file or a Naimark bundle.
pub fn parse_measurement(text: &str) -> Result<LoadedMeasurement> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if value.get("kind").and_then(|k| k.as_str()) == Some(NAIMARK_KIND) {
        let file: NaimarkFile = serde_json::from_value(value).map_err(|e| Error::Format(e.to_string()))?;
        let ext = file.to_extension()?;
        return Ok(LoadedMeasurement {
            measurement: ext.measurement.clone(),
            extension: Some(ext),
        });
    }
    let file: MatrixFile = serde_json::from_value(value).map_err(|e| Error::Format(e.to_string()))?;
    Ok(LoadedMeasurement {
        measurement: file.to_projective()?,
        extension: None,
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn load_matrix_file(path: &Path) -> Result<MatrixFile> {
    MatrixFile::parse(&read_text(path)?)
}
