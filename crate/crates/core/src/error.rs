use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. Precondition failures carry the
/// measured residual so callers can see how far off the input was.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not normal (commutator residual {residual:.3e})")]
    NotNormal { residual: f64 },
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("matrix is not an orthogonal projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator must be {expected}-dimensional, got {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("rank {k} is not admissible for dimension {n}")]
    BadRank { k: usize, n: usize },
    #[error("probability {0} is outside the open interval (0, 1)")]
    BadProbability(f64),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("numerically dependent input: {0}")]
    DegenerateInput(String),
    #[error("chord endpoints are not four distinct, argument-ordered unimodular points")]
    DegenerateChords,
    #[error("value {value} lies outside the range ({detail})")]
    ValueOutsideRange { value: String, detail: String },
    #[error("spectrum is degenerate; use the case analysis instead")]
    DegenerateSpectrum,
    #[error("sweep contains no points")]
    EmptySweep,
    #[error("hull enumeration needs {count} subsets, above the cap of {cap}")]
    CombinatorialBlowup { count: u128, cap: u128 },
    #[error("Kraus operators are not trace preserving (residual {residual:.3e})")]
    NotTracePreserving { residual: f64 },
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("code is not correctable (max residual {max_residual:.3e})")]
    NotCorrectable { max_residual: f64 },
    #[error("rotated error {index} has ambiguous polar factor (singular value {singular_value:.3e}, weight {weight:.3e})")]
    RankDeficiency {
        index: usize,
        singular_value: f64,
        weight: f64,
    },
    #[error("vector leaks outside its eigenspace (leak {leak:.3e})")]
    BadSupport { leak: f64 },
    #[error("vectors are not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}
