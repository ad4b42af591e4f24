//! Dense complex matrices, spectra, projections and scalar compressions.
//!
//! Everything above this module talks in terms of [`CMatrix`] (a dense
//! `nalgebra` matrix of `Complex<f64>`), [`Spectrum`] and [`Projection`].

mod cluster;
mod eigen;
mod projection;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use cluster::{cluster_eigenvalues, cluster_values, Cluster};
pub use eigen::{hermitian_eigendecomposition, normal_eigendecomposition, Spectrum, SpectrumOrdering};
pub use projection::{projection_from_vectors, Projection};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Numerical thresholds shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Scalar-compression and Knill-Laflamme residuals.
    pub eps_scalar: f64,
    /// Eigenvalue clustering.
    pub eps_degenerate: f64,
    /// Spectral reconstruction.
    pub eps_recon: f64,
    /// Projection, Hermiticity and unitarity checks.
    pub eps_proj: f64,
    /// Orthonormality and linear independence.
    pub eps_ortho: f64,
    /// Trace preservation.
    pub eps_tp: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps_scalar: 1e-9,
            eps_degenerate: 1e-8,
            eps_recon: 1e-10,
            eps_proj: 1e-10,
            eps_ortho: 1e-10,
            eps_tp: 1e-10,
        }
    }
}

impl ToleranceConfig {
    /// All thresholds must lie in `(0, 1e-3)`.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("eps_scalar", self.eps_scalar),
            ("eps_degenerate", self.eps_degenerate),
            ("eps_recon", self.eps_recon),
            ("eps_proj", self.eps_proj),
            ("eps_ortho", self.eps_ortho),
            ("eps_tp", self.eps_tp),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value < 1e-3) {
                return Err(Error::BadParameter(format!("{name} = {value} must lie in (0, 1e-3)")));
            }
        }
        Ok(())
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Computational basis vector `|index⟩` in dimension `n`.
pub fn basis_vector(n: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[index] = c(1.0, 0.0);
    v
}

pub fn diag(values: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(values))
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(values.len(), values.iter().map(|&x| c(x, 0.0))))
}

/// `|u⟩⟨v|`
pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// `e^{iθ}`
pub fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Principal argument folded into `[0, 2π)`.
pub fn principal_arg(z: C64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut a = z.arg();
    if a < 0.0 {
        a += tau;
    }
    if a >= tau {
        a = 0.0;
    }
    a
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

pub fn ensure_same_dim(expected: usize, m: &CMatrix) -> Result<()> {
    if m.nrows() != expected || m.ncols() != expected {
        return Err(Error::DimensionMismatch { expected, found: m.nrows().max(m.ncols()) });
    }
    Ok(())
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn hermitian_residual(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

pub fn normal_residual(m: &CMatrix) -> f64 {
    let ad = m.adjoint();
    (m * &ad - &ad * m).norm()
}

/// `‖U†U − 1‖_F`
pub fn unitary_residual(m: &CMatrix) -> f64 {
    (m.adjoint() * m - identity(m.nrows())).norm()
}

pub fn ensure_hermitian(m: &CMatrix, tol: &ToleranceConfig) -> Result<usize> {
    let n = ensure_square(m)?;
    let residual = hermitian_residual(m);
    if residual > tol.eps_proj * m.norm() {
        return Err(Error::NotHermitian { residual });
    }
    Ok(n)
}

pub fn ensure_normal(m: &CMatrix, tol: &ToleranceConfig) -> Result<usize> {
    let n = ensure_square(m)?;
    let residual = normal_residual(m);
    if residual > tol.eps_proj * m.norm_squared() {
        return Err(Error::NotNormal { residual });
    }
    Ok(n)
}

pub fn is_unitary(m: &CMatrix, tol: &ToleranceConfig) -> bool {
    m.nrows() == m.ncols() && unitary_residual(m) <= tol.eps_proj * (m.nrows() as f64).sqrt()
}

pub fn ensure_unitary(m: &CMatrix, tol: &ToleranceConfig) -> Result<usize> {
    let n = ensure_square(m)?;
    let residual = unitary_residual(m);
    if residual > tol.eps_proj * (n as f64).sqrt() {
        return Err(Error::NotUnitary { residual });
    }
    Ok(n)
}

/// True when every off-diagonal entry is exactly zero.
pub fn is_diagonal(m: &CMatrix) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)] == C64::new(0.0, 0.0)))
}

/// Multiply `v` by the phase that makes its largest-magnitude entry real and
/// positive. Near-ties resolve to the lowest index.
pub fn fix_phase(v: &mut CVector) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    if let Some(pivot) = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-9)) {
        let ph = v[pivot].conj() / v[pivot].norm();
        for z in v.iter_mut() {
            *z *= ph;
        }
        v[pivot] = c(v[pivot].re, 0.0);
    }
}

/// Modified Gram-Schmidt with one re-orthogonalisation pass. Columns whose
/// residual norm falls below `drop_tol` are discarded; the survivors come
/// back as orthonormal columns in input order.
pub fn orthonormalize(columns: &[CVector], drop_tol: f64) -> Vec<CVector> {
    let mut basis: Vec<CVector> = Vec::with_capacity(columns.len());
    for col in columns {
        let mut v = col.clone();
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.dotc(&v);
                v -= b * coeff;
            }
        }
        let norm = v.norm();
        if norm > drop_tol * scale.max(1.0) {
            basis.push(v / c(norm, 0.0));
        }
    }
    basis
}

pub fn columns_to_matrix(n: usize, columns: &[CVector]) -> CMatrix {
    let mut m = CMatrix::zeros(n, columns.len());
    for (j, col) in columns.iter().enumerate() {
        m.set_column(j, col);
    }
    m
}

/// `λ = tr(PAP)/rank(P)` if `‖PAP − λP‖_F ≤ tol·max(1, ‖A‖_F)`, else `None`.
pub fn scalar_compression_check(a: &CMatrix, p: &Projection, tol: f64) -> Result<Option<C64>> {
    let (lambda, residual) = compression_residual(a, p)?;
    if residual <= tol * a.norm().max(1.0) {
        Ok(Some(lambda))
    } else {
        Ok(None)
    }
}

/// The least-squares scalar `tr(PAP)/rank(P)` and the residual `‖PAP − λP‖_F`.
pub fn compression_residual(a: &CMatrix, p: &Projection) -> Result<(C64, f64)> {
    ensure_same_dim(p.dim(), a)?;
    let pm = p.matrix();
    let pap = pm * a * pm;
    let lambda = trace(&pap) / p.rank() as f64;
    let residual = (pap - pm * lambda).norm();
    Ok((lambda, residual))
}
