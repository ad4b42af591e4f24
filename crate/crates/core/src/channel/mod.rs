//! Quantum channels in operator-sum form.
//!
//! Kraus weights are folded into the operators, so the bi-unitary channel
//! `σ ↦ pVσV† + (1−p)WσW†` has Kraus list `{√p·V, √(1−p)·W}`.

mod haar;
pub mod pauli;

use sha2::{Digest, Sha256};

use crate::matcore::{
    c, ensure_square, ensure_unitary, hermitian_eigendecomposition, identity, trace, CMatrix, ToleranceConfig,
};
use crate::{Error, Result};

pub use haar::{complex_gaussian, ginibre, random_unitary, random_unitary_with, random_vector, seeded_rng};

/// Operator-sum representation `ℰ(σ) = Σ_a E_a σ E_a†`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<CMatrix>,
}

impl KrausChannel {
    /// Checks that every operator is `dim × dim` and that
    /// `‖Σ E_a†E_a − 1‖_F ≤ eps_tp`.
    pub fn new(ops: Vec<CMatrix>, tol: &ToleranceConfig) -> Result<Self> {
        let ch = Self::from_ops_unchecked(ops)?;
        let residual = ch.tp_residual();
        if residual > tol.eps_tp {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(ch)
    }

    /// Shape checks only; trace preservation is not enforced. Used for
    /// deliberately broken channels in diagnostics.
    pub fn from_ops_unchecked(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::BadParameter("channel needs at least one Kraus operator".into()))?;
        let dim = ensure_square(first)?;
        for op in &ops {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: op.nrows().max(op.ncols()) });
            }
        }
        Ok(Self { dim, ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, ops: vec![identity(dim)] }
    }

    /// `σ ↦ Σ_k p_k U_k σ U_k†`.
    pub fn randomized_unitary(unitaries: &[CMatrix], weights: &[f64], tol: &ToleranceConfig) -> Result<Self> {
        if unitaries.len() != weights.len() {
            return Err(Error::BadParameter("one weight per unitary required".into()));
        }
        let mut ops = Vec::with_capacity(unitaries.len());
        for (u, &w) in unitaries.iter().zip(weights) {
            ensure_unitary(u, tol)?;
            if !(w >= 0.0) {
                return Err(Error::BadProbability(w));
            }
            ops.push(u * c(w.sqrt(), 0.0));
        }
        Self::new(ops, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `‖Σ_a E_a†E_a − 1‖_F`
    pub fn tp_residual(&self) -> f64 {
        let sum = self.ops.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, e| acc + e.adjoint() * e);
        (sum - identity(self.dim)).norm()
    }

    /// Same channel with zero operators appended up to `len` entries.
    pub fn padded(&self, len: usize) -> Self {
        let mut ops = self.ops.clone();
        while ops.len() < len {
            ops.push(CMatrix::zeros(self.dim, self.dim));
        }
        Self { dim: self.dim, ops }
    }

    /// `Σ_a E_a X E_a†` for an arbitrary operator `X`.
    pub fn apply_operator(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != self.dim || x.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.nrows().max(x.ncols()) });
        }
        Ok(self.ops.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, e| acc + e * x * e.adjoint()))
    }

    /// Hex SHA-256 of the dimension and the raw bits of every entry.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.dim as u64).to_le_bytes());
        h.update((self.ops.len() as u64).to_le_bytes());
        for op in &self.ops {
            // row-major
            for i in 0..self.dim {
                for j in 0..self.dim {
                    h.update(op[(i, j)].re.to_le_bytes());
                    h.update(op[(i, j)].im.to_le_bytes());
                }
            }
        }
        hex::encode(h.finalize())
    }
}

/// `ℰ(ρ) = Σ_a E_a ρ E_a†`
pub fn apply(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let out = ch.apply_operator(rho.matrix())?;
    Ok(DensityMatrix(hermitize(&out)))
}

fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Positive semidefinite operator of unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(matrix: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        ensure_square(&matrix)?;
        let herm = (&matrix - matrix.adjoint()).norm();
        if herm > tol.eps_proj {
            return Err(Error::NotDensityMatrix(format!("Hermitian residual {herm:.3e}")));
        }
        let matrix = hermitize(&matrix);
        let tr = trace(&matrix).re;
        if (tr - 1.0).abs() > tol.eps_proj {
            return Err(Error::NotDensityMatrix(format!("trace {tr}")));
        }
        let min = hermitian_eigendecomposition(&matrix, tol)?.value(0).re;
        if min < -tol.eps_proj {
            return Err(Error::NotDensityMatrix(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self(matrix))
    }

    /// Pure state `|ψ⟩⟨ψ|` of a (normalised) vector.
    pub fn pure(psi: &crate::CVector) -> Self {
        let v = psi / c(psi.norm(), 0.0);
        Self(&v * v.adjoint())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        trace(&self.0).re
    }
}

/// `σ ↦ pVσV† + (1−p)WσW†` with `0 < p < 1`.
#[derive(Debug, Clone)]
pub struct BiUnitaryChannel {
    v: CMatrix,
    w: CMatrix,
    p: f64,
}

pub fn make_buc(v: CMatrix, w: CMatrix, p: f64, tol: &ToleranceConfig) -> Result<BiUnitaryChannel> {
    let n = ensure_unitary(&v, tol)?;
    let m = ensure_unitary(&w, tol)?;
    if n != m {
        return Err(Error::DimensionMismatch { expected: n, found: m });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::BadProbability(p));
    }
    Ok(BiUnitaryChannel { v, w, p })
}

impl BiUnitaryChannel {
    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    pub fn w(&self) -> &CMatrix {
        &self.w
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.v.nrows()
    }

    /// `{√p·V, √(1−p)·W}`
    pub fn kraus(&self) -> KrausChannel {
        KrausChannel {
            dim: self.dim(),
            ops: vec![&self.v * c(self.p.sqrt(), 0.0), &self.w * c((1.0 - self.p).sqrt(), 0.0)],
        }
    }

    /// `U = V†W`: the channel `{1, U}` with the same weight has exactly the
    /// same correctable codes.
    pub fn reduce(&self) -> CMatrix {
        buc_reduce(self)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply(&self.kraus(), rho)
    }
}

pub fn buc_reduce(ch: &BiUnitaryChannel) -> CMatrix {
    ch.v.adjoint() * &ch.w
}
