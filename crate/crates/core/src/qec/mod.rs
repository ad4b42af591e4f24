//! Knill-Laflamme verification, the Λ matrix and recovery synthesis.

use crate::channel::{ginibre, seeded_rng, KrausChannel};
use crate::matcore::{
    c, columns_to_matrix, compression_residual, ensure_same_dim, ensure_square, hermitian_eigendecomposition, identity, trace,
    CMatrix, CVector, Projection, ToleranceConfig,
};
use crate::{Error, Result};

/// The matrix `(λ_ab)` with `P E_a†E_b P = λ_ab P`, in the channel's own
/// Kraus basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaMatrix {
    entries: CMatrix,
}

impl LambdaMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        ensure_square(&entries)?;
        Ok(Self { entries })
    }

    pub fn m(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub correctable: bool,
    /// Present iff `correctable`.
    pub lambda: Option<LambdaMatrix>,
    /// `tr(P E_a†E_b P)/rank P`, whether or not the code is correctable.
    pub lambda_estimate: LambdaMatrix,
    pub max_residual: f64,
    /// `‖P E_a†E_b P − λ_ab P‖_F`, indexed `[a][b]`.
    pub per_pair_residuals: Vec<Vec<f64>>,
}

/// `Q†E_a†E_b Q` for the code basis `Q`.
fn code_grams(ch: &KrausChannel, p: &Projection) -> Result<Vec<Vec<CMatrix>>> {
    ensure_same_dim(ch.dim(), p.matrix())?;
    let q = p.basis();
    let images: Vec<CMatrix> = ch.ops().iter().map(|e| e * q).collect();
    Ok(images.iter().map(|ba| images.iter().map(|bb| ba.adjoint() * bb).collect()).collect())
}

/// Checks `P E_a†E_b P = λ_ab P` for every pair. The residual of each pair
/// is measured on the code, where `‖Q(G − λ1)Q†‖_F = ‖G − λ1‖_F`.
pub fn kl_verify(ch: &KrausChannel, p: &Projection, tol: &ToleranceConfig) -> Result<VerificationReport> {
    let grams = code_grams(ch, p)?;
    let m = ch.len();
    let k = p.rank();
    let mut lambda = CMatrix::zeros(m, m);
    let mut residuals = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in 0..m {
            let g = &grams[a][b];
            let l = trace(g) / k as f64;
            lambda[(a, b)] = l;
            residuals[a][b] = (g - identity(k) * l).norm();
        }
    }
    let max_residual = residuals.iter().flatten().copied().fold(0.0, f64::max);
    let correctable = max_residual <= tol.eps_scalar;
    let estimate = LambdaMatrix { entries: lambda };
    Ok(VerificationReport {
        correctable,
        lambda: correctable.then(|| estimate.clone()),
        lambda_estimate: estimate,
        max_residual,
        per_pair_residuals: residuals,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityDiagnostics {
    pub is_density: bool,
    pub hermitian_residual: f64,
    pub min_eigenvalue: f64,
    pub trace: f64,
}

/// Whether `Λ` is a density matrix: Hermitian, positive semidefinite and of
/// unit trace.
pub fn lambda_density_check(lambda: &LambdaMatrix, tol: &ToleranceConfig) -> DensityDiagnostics {
    let l = lambda.entries();
    let hermitian_residual = (l - l.adjoint()).norm();
    let herm = (l + l.adjoint()) * c(0.5, 0.0);
    let min_eigenvalue = hermitian_eigendecomposition(&herm, tol).map_or(f64::NAN, |s| s.value(0).re);
    let tr = trace(l);
    let is_density = hermitian_residual <= tol.eps_proj
        && min_eigenvalue >= -tol.eps_proj
        && (tr - c(1.0, 0.0)).norm() <= tol.eps_tp;
    DensityDiagnostics { is_density, hermitian_residual, min_eigenvalue, trace: tr.re }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub label: String,
    pub matrix: CMatrix,
}

/// `E_a†E_a` for every `a`, then `T⁺_ab = E_a†E_b + E_b†E_a` and
/// `T⁻_ab = i(E_a†E_b − E_b†E_a)` for every `a < b`. A code satisfies the
/// Knill-Laflamme condition iff it compresses every member to a scalar.
pub fn hermitian_family(ch: &KrausChannel) -> Vec<FamilyMember> {
    let ops = ch.ops();
    let m = ops.len();
    let mut out: Vec<FamilyMember> = ops
        .iter()
        .enumerate()
        .map(|(a, e)| FamilyMember { label: format!("E{a}†E{a}"), matrix: e.adjoint() * e })
        .collect();
    for a in 0..m {
        for b in a + 1..m {
            let ab = ops[a].adjoint() * &ops[b];
            let ba = ab.adjoint();
            out.push(FamilyMember { label: format!("T+({a},{b})"), matrix: &ab + &ba });
            out.push(FamilyMember { label: format!("T-({a},{b})"), matrix: (ab - ba) * c(0.0, 1.0) });
        }
    }
    out
}

/// Largest residual `‖PXP − λP‖_F` over the Hermitian family.
pub fn family_max_residual(ch: &KrausChannel, p: &Projection) -> Result<f64> {
    hermitian_family(ch)
        .iter()
        .map(|f| compression_residual(&f.matrix, p).map(|(_, r)| r))
        .try_fold(0.0, |acc, r| r.map(|r| f64::max(acc, r)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockPositivity {
    /// `mN × mN` with `(i, j)` block `E_i†E_j`.
    pub e_block: CMatrix,
    pub min_eigenvalue: f64,
    pub positive: bool,
    /// `‖P̃EP̃ − Λ⊗P‖_F` with `P̃ = 1_m ⊗ P`.
    pub residual: f64,
}

pub fn block_e_positivity(ch: &KrausChannel, p: &Projection, tol: &ToleranceConfig) -> Result<BlockPositivity> {
    let report = kl_verify(ch, p, tol)?;
    let n = ch.dim();
    let m = ch.len();
    let ops = ch.ops();
    let mut e_block = CMatrix::zeros(m * n, m * n);
    let pm = p.matrix();
    let lambda = report.lambda_estimate.entries();
    let mut residual_sq = 0.0;
    for i in 0..m {
        for j in 0..m {
            let block = ops[i].adjoint() * &ops[j];
            residual_sq += (pm * &block * pm - pm * lambda[(i, j)]).norm_squared();
            e_block.view_mut((i * n, j * n), (n, n)).copy_from(&block);
        }
    }
    let herm = (&e_block + e_block.adjoint()) * c(0.5, 0.0);
    let min_eigenvalue = hermitian_eigendecomposition(&herm, tol)?.value(0).re;
    let positive = min_eigenvalue >= -tol.eps_proj * e_block.norm();
    Ok(BlockPositivity { e_block, min_eigenvalue, positive, residual: residual_sq.sqrt() })
}

/// A recovery channel for a code, with the data it was assembled from.
#[derive(Debug, Clone)]
pub struct RecoveryChannel {
    pub channel: KrausChannel,
    pub code: Projection,
    /// Eigenvalues `d_b` of `Λ` that were kept, descending.
    pub weights: Vec<f64>,
    /// `N × k` isometries `S_b` with `F_b Q = √d_b S_b`.
    pub isometries: Vec<CMatrix>,
}

/// Diagonalises `Λ = M D M†`, rotates the errors to `F_b = Σ_a M_ab E_a`
/// (so that `P F_b†F_c P = δ_bc d_b P`), takes the polar isometry `S_b` of
/// each `F_b` on the code and returns `{Q S_b†} ∪ {Π_⊥}`, where `Π_⊥`
/// projects onto the complement of all `range(S_b)`.
pub fn build_recovery(ch: &KrausChannel, p: &Projection, tol: &ToleranceConfig) -> Result<RecoveryChannel> {
    let report = kl_verify(ch, p, tol)?;
    let lambda = report.lambda.ok_or(Error::NotCorrectable { max_residual: report.max_residual })?;
    let l = lambda.entries();
    let eig = hermitian_eigendecomposition(&((l + l.adjoint()) * c(0.5, 0.0)), tol)?;
    let n = ch.dim();
    let m = ch.len();
    let q = p.basis();

    let mut weights = Vec::new();
    let mut isometries = Vec::new();
    for b in (0..m).rev() {
        let d = eig.value(b).re;
        if d <= tol.eps_scalar {
            continue;
        }
        let mb = eig.vector(b);
        let f = ch.ops().iter().enumerate().fold(CMatrix::zeros(n, n), |acc, (a, e)| acc + e * mb[a]);
        let fq = f * q;
        let svd = fq.svd(true, true);
        let smallest = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
        if smallest < tol.eps_scalar {
            return Err(Error::RankDeficiency { index: weights.len(), singular_value: smallest, weight: d });
        }
        let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
            return Err(Error::NumericalFailure("SVD did not return singular vectors".into()));
        };
        let mut s = u * v_t;
        let first: CVector = s.column(0).into_owned();
        let pivot = first.iter().enumerate().fold(0, |best, (i, z)| if z.norm() > first[best].norm() * (1.0 + 1e-9) { i } else { best });
        let ph = first[pivot].conj() / first[pivot].norm();
        s *= ph;
        weights.push(d);
        isometries.push(s);
    }

    let mut ops: Vec<CMatrix> = isometries.iter().map(|s| q * s.adjoint()).collect();
    let covered = isometries.iter().fold(CMatrix::zeros(n, n), |acc, s| acc + s * s.adjoint());
    let rest = identity(n) - covered;
    let rest = (&rest + rest.adjoint()) * c(0.5, 0.0);
    let rspec = hermitian_eigendecomposition(&rest, tol)?;
    let complement: Vec<CVector> = (0..n).filter(|&j| rspec.value(j).re > 0.5).map(|j| rspec.vector(j)).collect();
    if !complement.is_empty() {
        let qc = columns_to_matrix(n, &complement);
        ops.push(&qc * qc.adjoint());
    }
    let channel = KrausChannel::new(ops, tol)?;
    Ok(RecoveryChannel { channel, code: p.clone(), weights, isometries })
}

/// Largest `‖R(ℰ(σ)) − σ‖_F` over `n_samples` random code states
/// `σ = PρP / tr(Pρ)`; sample `i` draws `ρ` from stream `i` of `seed`.
pub fn verify_recovery(ch: &KrausChannel, r: &RecoveryChannel, p: &Projection, n_samples: usize, seed: u64) -> Result<f64> {
    let n = ch.dim();
    ensure_same_dim(n, p.matrix())?;
    ensure_same_dim(n, &r.channel.ops()[0])?;
    let pm = p.matrix();
    let mut worst: f64 = 0.0;
    for i in 0..n_samples {
        let g = ginibre(n, n, &mut seeded_rng(seed, i as u64));
        let rho = pm * &g * g.adjoint() * pm;
        let sigma = &rho / trace(&rho);
        let out = r.channel.apply_operator(&ch.apply_operator(&sigma)?)?;
        worst = worst.max((out - sigma).norm());
    }
    Ok(worst)
}
