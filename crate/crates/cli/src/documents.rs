//! JSON documents read and written by the command-line tool. Complex
//! numbers are `[re, im]` pairs and matrices are row-major.

use qcomp::{CMatrix, ToleranceConfig, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let data = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| [m[(i, j)].re, m[(i, j)].im])).collect();
        Self { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, CliError> {
        if self.data.len() != self.rows * self.cols {
            return Err(CliError::Parse(format!(
                "matrix declares {}×{} but holds {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(CliError::Parse("matrix entries must be finite".into()));
        }
        Ok(CMatrix::from_row_iterator(self.rows, self.cols, self.data.iter().map(|&[re, im]| C64::new(re, im))))
    }

    pub fn to_square_matrix(&self) -> Result<CMatrix, CliError> {
        if self.rows != self.cols {
            return Err(CliError::Parse(format!("expected a square matrix, got {}×{}", self.rows, self.cols)));
        }
        self.to_matrix()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliModel {
    ZZ,
    Z1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ChannelDocument {
    Kraus {
        dimension: usize,
        kraus: Vec<MatrixDocument>,
    },
    Buc {
        dimension: usize,
        #[serde(rename = "V")]
        v: MatrixDocument,
        #[serde(rename = "W")]
        w: MatrixDocument,
        p: f64,
    },
    PauliDemo {
        dimension: usize,
        model: PauliModel,
        p: f64,
    },
}

impl ChannelDocument {
    pub fn dimension(&self) -> usize {
        match self {
            ChannelDocument::Kraus { dimension, .. }
            | ChannelDocument::Buc { dimension, .. }
            | ChannelDocument::PauliDemo { dimension, .. } => *dimension,
        }
    }
}

/// Envelope of every command's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument<R> {
    pub command: String,
    pub inputs_digest: String,
    pub result: R,
    pub tolerances: ToleranceConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HullMembership {
    pub k: usize,
    pub lambda: C64,
    pub member: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RangePayload {
    Range(qcomp::numrange::RangeResult),
    Hull(HullMembership),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompressionValue {
    pub a: usize,
    pub b: usize,
    pub value: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeDocument {
    pub projection: MatrixDocument,
    pub rank: usize,
    pub compression_values: Vec<CompressionValue>,
    pub lambda: MatrixDocument,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    pub channel_fingerprint: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<qcomp::numrange::RangeResult>,
    pub exhaustive: bool,
    pub notes: Vec<String>,
    pub codes: Vec<CodeDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityDocument {
    pub is_density: bool,
    pub hermitian_residual: f64,
    pub min_eigenvalue: f64,
    pub trace: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDocument {
    pub min_eigenvalue: f64,
    pub positive: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationDocument {
    pub correctable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<MatrixDocument>,
    pub lambda_estimate: MatrixDocument,
    pub max_residual: f64,
    pub per_pair_residuals: Vec<Vec<f64>>,
    pub lambda_density: DensityDocument,
    pub block_positivity: BlockDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoveryDocument {
    pub kraus: Vec<MatrixDocument>,
    pub weights: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub max_deviation: f64,
    pub within_tolerance: bool,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}
