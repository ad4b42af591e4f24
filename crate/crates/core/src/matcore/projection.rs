use super::{
    c, columns_to_matrix, ensure_square, hermitian_eigendecomposition, orthonormalize, trace, CMatrix, CVector,
    ToleranceConfig,
};
use crate::{Error, Result};

/// Orthogonal projection of rank ≥ 1, stored together with an orthonormal
/// basis of its range.
#[derive(Debug, Clone)]
pub struct Projection {
    matrix: CMatrix,
    basis: CMatrix,
}

impl Projection {
    /// Validate an explicit matrix as a projection: Hermitian, idempotent and
    /// with trace within `eps_proj` of a positive integer.
    pub fn new(matrix: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let n = ensure_square(&matrix)?;
        let herm = (&matrix - matrix.adjoint()).norm();
        let idem = (&matrix * &matrix - &matrix).norm();
        let tr = trace(&matrix);
        let rank = tr.re.round();
        let trace_err = (tr - c(rank, 0.0)).norm();
        let residual = herm.max(idem).max(trace_err);
        if residual > tol.eps_proj || rank < 1.0 {
            return Err(Error::NotProjection { residual });
        }
        let eig = hermitian_eigendecomposition(&((&matrix + matrix.adjoint()) * c(0.5, 0.0)), tol)?;
        let rank = rank as usize;
        let cols: Vec<CVector> = (n - rank..n).map(|j| eig.vector(j)).collect();
        Ok(Self { matrix, basis: columns_to_matrix(n, &cols) })
    }

    /// `QQ†` for a matrix `Q` with orthonormal columns (not re-checked).
    pub fn from_orthonormal_columns(q: CMatrix) -> Self {
        let matrix = &q * q.adjoint();
        Self { matrix, basis: q }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `N × rank` matrix with orthonormal columns spanning the range.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max(‖P − P†‖_F, ‖P² − P‖_F, |tr P − rank|)`
    pub fn residual(&self) -> f64 {
        let m = &self.matrix;
        let herm = (m - m.adjoint()).norm();
        let idem = (m * m - m).norm();
        let tr = (trace(m) - c(self.rank() as f64, 0.0)).norm();
        herm.max(idem).max(tr)
    }

    /// Frobenius distance between two projections; zero iff same subspace.
    pub fn distance(&self, other: &Projection) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }
}

/// Projection onto the span of `vectors`, which must be linearly independent.
pub fn projection_from_vectors(vectors: &[CVector], tol: &ToleranceConfig) -> Result<Projection> {
    let first = vectors.first().ok_or_else(|| Error::DegenerateInput("no vectors given".into()))?;
    let n = first.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
    }
    let mut unit = Vec::with_capacity(vectors.len());
    for v in vectors {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DegenerateInput("zero or non-finite vector".into()));
        }
        unit.push(v / c(norm, 0.0));
    }
    let m = columns_to_matrix(n, &unit);
    let gram = m.adjoint() * &m;
    let min_eig = hermitian_eigendecomposition(&gram, tol)?.value(0).re;
    if min_eig < tol.eps_ortho {
        return Err(Error::DegenerateInput(format!("smallest Gram eigenvalue {min_eig:.3e}")));
    }
    let basis = orthonormalize(&unit, 0.0);
    Ok(Projection::from_orthonormal_columns(columns_to_matrix(n, &basis)))
}
