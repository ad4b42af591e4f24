//! Code search: compression-values, their realising projections, and the
//! intersection of those projections across error pairs.

mod generic;
mod multi;

use std::collections::BTreeMap;

use crate::channel::{make_buc, pauli};
use crate::matcore::{
    basis_vector, c, columns_to_matrix, ensure_same_dim, identity, trace, CMatrix, CVector, Projection, ToleranceConfig, C64,
};
use crate::numrange::{unitary4_rank2_projection, unitary4_rank2_range, RangeResult, UnitaryCase};
use crate::qec::{kl_verify, LambdaMatrix};
use crate::{Error, Result};

pub use generic::{twoqubit_generic_solve, SweepSpec, TwoQubitCodeParams};
pub use multi::{multi_unitary_common_code, SearchBudget, SearchOutcome};

/// A code projection with its compression values `λ_ab = tr(P E_a†E_b P)/k`
/// for a list of operators.
#[derive(Debug, Clone)]
pub struct CodeProjection {
    pub projection: Projection,
    pub compression_values: BTreeMap<(usize, usize), C64>,
}

impl CodeProjection {
    pub fn for_operators(projection: Projection, ops: &[CMatrix]) -> Result<Self> {
        let q = projection.basis();
        let k = projection.rank() as f64;
        let mut images = Vec::with_capacity(ops.len());
        for op in ops {
            ensure_same_dim(projection.dim(), op)?;
            images.push(op * q);
        }
        let mut compression_values = BTreeMap::new();
        for (a, ea) in images.iter().enumerate() {
            for (b, eb) in images.iter().enumerate() {
                compression_values.insert((a, b), trace(&(ea.adjoint() * eb)) / k);
            }
        }
        Ok(Self { projection, compression_values })
    }

    pub fn rank(&self) -> usize {
        self.projection.rank()
    }
}

/// `span{√a|00⟩ + √(1−a)|01⟩, √a|11⟩ + √(1−a)|10⟩}`, on which `ZZ`
/// compresses to `2a − 1`. Compression values refer to `{1, ZZ}`.
pub fn zz_code(a: f64) -> Result<CodeProjection> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::BadParameter(format!("ZZ family parameter {a} outside [0, 1]")));
    }
    let (s, t) = (c(a.sqrt(), 0.0), c((1.0 - a).sqrt(), 0.0));
    let e = |i| basis_vector(4, i);
    let psi1 = e(0) * s + e(1) * t;
    let psi2 = e(3) * s + e(2) * t;
    let p = Projection::from_orthonormal_columns(columns_to_matrix(4, &[psi1, psi2]));
    CodeProjection::for_operators(p, &[identity(4), pauli::zz()])
}

/// `span{ψ₊ + ψ₋, φ₊ + φ₋}` from orthonormal pairs in the `+1` and `−1`
/// eigenspaces of `Z₁` on two qubits. Compression values refer to `{1, Z₁}`.
pub fn z1_code(
    psi_plus: &CVector,
    phi_plus: &CVector,
    psi_minus: &CVector,
    phi_minus: &CVector,
    tol: &ToleranceConfig,
) -> Result<CodeProjection> {
    let vectors = [psi_plus, phi_plus, psi_minus, phi_minus];
    if let Some(v) = vectors.iter().find(|v| v.len() != 4) {
        return Err(Error::DimensionMismatch { expected: 4, found: v.len() });
    }
    // Z₁ = diag(1, 1, −1, −1): |0x⟩ span the +1 eigenspace
    for (i, v) in vectors.iter().enumerate() {
        let outside = if i < 2 { [2, 3] } else { [0, 1] };
        let leak = (v[outside[0]].norm_sqr() + v[outside[1]].norm_sqr()).sqrt();
        if leak > tol.eps_ortho {
            return Err(Error::BadSupport { leak });
        }
    }
    for (u, v) in [(psi_plus, phi_plus), (psi_minus, phi_minus)] {
        let residual = (u.norm() - 1.0).abs().max((v.norm() - 1.0).abs()).max(u.dotc(v).norm());
        if residual > tol.eps_ortho {
            return Err(Error::NotOrthonormal { residual });
        }
    }
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let xi1 = (psi_plus + psi_minus) * h;
    let xi2 = (phi_plus + phi_minus) * h;
    let p = Projection::from_orthonormal_columns(columns_to_matrix(4, &[xi1, xi2]));
    CodeProjection::for_operators(p, &[identity(4), pauli::z1(2)])
}

#[derive(Debug, Clone)]
pub struct FamilyCode {
    pub code: CodeProjection,
    pub lambda: LambdaMatrix,
    pub max_residual: f64,
}

/// Correctable codes found for one channel.
#[derive(Debug, Clone)]
pub struct CodeFamily {
    pub channel_fingerprint: String,
    pub codes: Vec<FamilyCode>,
    /// True when the listed codes together with `notes` describe every
    /// correctable rank-2 code.
    pub exhaustive: bool,
    pub notes: Vec<String>,
    pub range: RangeResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FindCodesConfig {
    /// Number of compression-values sampled along a segment-valued range.
    pub segment_grid: usize,
    pub sweep: SweepSpec,
}

impl Default for FindCodesConfig {
    fn default() -> Self {
        Self { segment_grid: 11, sweep: SweepSpec::default() }
    }
}

/// Rank-2 correctable codes of the bi-unitary channel `{√p·V, √(1−p)·W}` on
/// two qubits, found through the reduced unitary `U = V†W`.
pub fn find_codes_buc4(
    v: &CMatrix,
    w: &CMatrix,
    p: f64,
    config: &FindCodesConfig,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<CodeFamily> {
    let buc = make_buc(v.clone(), w.clone(), p, tol)?;
    let u = buc.reduce();
    let range = unitary4_rank2_range(&u, tol)?;
    let channel = buc.kraus();
    let case = range.case().expect("4×4 unitary ranges carry a case label");

    let values = match range {
        RangeResult::Segment { .. } => range.sample(config.segment_grid.max(1)),
        _ => range.sample(1),
    };
    let mut candidates: Vec<Projection> = Vec::new();
    for &lambda in &values {
        candidates.push(unitary4_rank2_projection(&u, lambda, tol)?);
    }
    let mut notes = Vec::new();
    match case {
        UnitaryCase::A => {
            let generic = twoqubit_generic_solve(&u, &config.sweep, seed, tol)?;
            notes.push(format!("{} codes from the generic parameter sweep", generic.len()));
            candidates.extend(generic.into_iter().map(|c| c.projection));
        }
        UnitaryCase::C => notes.push(format!("segment sampled at {} compression-values", values.len())),
        UnitaryCase::D => {
            candidates.extend(triple_subspace_codes(&u, tol)?);
            notes.push("every rank-2 subspace of the triple eigenspace is correctable, and no other".into());
        }
        UnitaryCase::E => notes.push("all rank-2 subspaces correctable".into()),
        UnitaryCase::B => {}
    }

    let mut codes: Vec<FamilyCode> = Vec::new();
    let mut rejected = 0;
    for proj in candidates {
        if codes.iter().any(|c| c.code.projection.distance(&proj) < 1e-6) {
            continue;
        }
        let report = kl_verify(&channel, &proj, tol)?;
        match report.lambda {
            Some(lambda) => codes.push(FamilyCode {
                code: CodeProjection::for_operators(proj, channel.ops())?,
                lambda,
                max_residual: report.max_residual,
            }),
            None => rejected += 1,
        }
    }
    if rejected > 0 {
        notes.push(format!("{rejected} candidates failed verification and were dropped"));
    }
    Ok(CodeFamily {
        channel_fingerprint: channel.fingerprint(),
        codes,
        exhaustive: matches!(case, UnitaryCase::D | UnitaryCase::E),
        notes,
        range,
    })
}

/// The three coordinate planes of the triple eigenspace.
fn triple_subspace_codes(u: &CMatrix, tol: &ToleranceConfig) -> Result<Vec<Projection>> {
    let eig = crate::matcore::normal_eigendecomposition(u, tol)?;
    let clusters = crate::matcore::cluster_eigenvalues(&eig, tol.eps_degenerate);
    let triple = clusters.iter().find(|c| c.multiplicity == 3).ok_or(Error::DegenerateSpectrum)?;
    let m = &triple.members;
    Ok([(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| Projection::from_orthonormal_columns(columns_to_matrix(4, &[eig.vector(m[i]), eig.vector(m[j])])))
        .collect())
}
