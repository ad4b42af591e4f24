//! All rank-2 codes of a two-qubit unitary with non-degenerate spectrum.
//!
//! Work happens in the eigenbasis of `U′ = U − λ1`, where `U′` is diagonal
//! with entries `z′_j` and the origin lies on both chords `z′₁z′₃` and
//! `z′₂z′₄`. A unit vector `ξ` has `⟨ξ|U′ξ⟩ = 0` iff its coefficients are
//!
//! `(cos α cos β, e^{iθ₂} sin α cos γ, e^{iθ₃} cos α sin β, e^{iθ₄} sin α sin γ)`
//!
//! up to a global phase, with `β`, `γ` fixed by the spectrum. A code is
//! `span{ξ₁, ξ₂}` with `ξ₂ ⊥ {ξ₁, U′ξ₁, U′†ξ₁}` and `⟨ξ₂|U′ξ₂⟩ = 0`.

use nalgebra::{Matrix2, Matrix2x4, Vector2, Vector4};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use super::CodeProjection;
use crate::channel::seeded_rng;
use crate::matcore::{
    c, columns_to_matrix, identity, normal_eigendecomposition, scalar_compression_check, CMatrix, CVector, Projection,
    ToleranceConfig, C64,
};
use crate::numrange::{unitary4_rank2_range, RangeResult};
use crate::{Error, Result};

type V4 = Vector4<C64>;

/// Sweep over the angles defining `ξ₁`. Point 0 is the eigenvalue pairing
/// (`α = 0`); the rest are seeded uniform draws. The sweep stops once
/// `max_codes` distinct codes have been accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub points: usize,
    pub max_codes: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self { points: 10_000, max_codes: 64 }
    }
}

/// Angles of the two code vectors in the shifted eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitCodeParams {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub gamma: [f64; 2],
    /// `θ_kj` for `j = 2, 3, 4`.
    pub theta: [[f64; 3]; 2],
}

impl TwoQubitCodeParams {
    /// `(a_k, b_k, c_k, d_k)`, the coefficients of `ξ_k` on the eigenvectors
    /// `ψ₁ … ψ₄`.
    pub fn coefficients(&self, k: usize) -> [C64; 4] {
        coefficients(self.alpha[k], self.beta[k], self.gamma[k], self.theta[k])
    }

    /// Reads the angles off an orthonormal basis of `code`, with each
    /// vector's first non-negligible coefficient made real positive.
    pub fn from_code(u: &CMatrix, code: &Projection, tol: &ToleranceConfig) -> Result<Self> {
        let frame = Frame::new(u, tol)?;
        if code.rank() != 2 {
            return Err(Error::BadRank { k: code.rank(), n: 4 });
        }
        let mut out = Self { alpha: [0.0; 2], beta: [0.0; 2], gamma: [0.0; 2], theta: [[0.0; 3]; 2] };
        for k in 0..2 {
            let v = code.basis().column(k).into_owned();
            let mut x: [C64; 4] = std::array::from_fn(|j| frame.vectors[j].dotc(&v));
            if let Some(first) = x.iter().position(|z| z.norm() > 1e-12) {
                let ph = x[first].conj() / x[first].norm();
                x.iter_mut().for_each(|z| *z *= ph);
            }
            let n = |z: C64| z.norm();
            out.alpha[k] = (n(x[1]).hypot(n(x[3]))).atan2(n(x[0]).hypot(n(x[2])));
            out.beta[k] = n(x[2]).atan2(n(x[0]));
            out.gamma[k] = n(x[3]).atan2(n(x[1]));
            for j in 0..3 {
                out.theta[k][j] = if x[j + 1].norm() > 1e-12 { x[j + 1].arg() } else { 0.0 };
            }
        }
        Ok(out)
    }
}

fn coefficients(alpha: f64, beta: f64, gamma: f64, theta: [f64; 3]) -> [C64; 4] {
    let e = |t: f64| C64::from_polar(1.0, t);
    [
        c(alpha.cos() * beta.cos(), 0.0),
        e(theta[0]) * (alpha.sin() * gamma.cos()),
        e(theta[1]) * (alpha.cos() * beta.sin()),
        e(theta[2]) * (alpha.sin() * gamma.sin()),
    ]
}

/// Shifted eigen-data with the cyclic labelling starting at the eigenvalue
/// farthest from `λ`, which keeps the labelling unchanged under `U → e^{iφ}U`.
struct Frame {
    lambda: C64,
    z: [C64; 4],
    vectors: [CVector; 4],
    beta: f64,
    gamma: f64,
}

impl Frame {
    fn new(u: &CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let lambda = match unitary4_rank2_range(u, tol)? {
            RangeResult::Point { value, case: Some(crate::numrange::UnitaryCase::A) } => value,
            _ => return Err(Error::DegenerateSpectrum),
        };
        let eig = normal_eigendecomposition(u, tol)?;
        let shifted: Vec<C64> = eig.values().iter().map(|z| z - lambda).collect();
        let start = (0..4).fold(0, |best, j| if shifted[j].norm() > shifted[best].norm() { j } else { best });
        let order: [usize; 4] = std::array::from_fn(|i| (start + i) % 4);
        let z = order.map(|j| shifted[j]);
        let vectors = order.map(|j| eig.vector(j));
        let beta = (z[2].norm() / (z[0].norm() + z[2].norm())).sqrt().acos();
        let gamma = (z[3].norm() / (z[1].norm() + z[3].norm())).sqrt().acos();
        Ok(Self { lambda, z, vectors, beta, gamma })
    }

    fn xi(&self, p: &[f64; 4]) -> V4 {
        V4::from(coefficients(p[0], self.beta, self.gamma, [p[1], p[2], p[3]]))
    }

    fn apply(&self, x: &V4) -> V4 {
        V4::from_fn(|j, _| self.z[j] * x[j])
    }

    fn apply_adjoint(&self, x: &V4) -> V4 {
        V4::from_fn(|j, _| self.z[j].conj() * x[j])
    }

    fn to_standard(&self, x: &V4) -> CVector {
        (0..4).fold(CVector::zeros(4), |acc, j| acc + &self.vectors[j] * x[j])
    }
}

/// Orthonormal basis of `span{x, U′x, U′†x}` and of its complement.
fn split(frame: &Frame, x: &V4) -> (Vec<V4>, Vec<V4>) {
    let mut span: Vec<V4> = Vec::with_capacity(4);
    for v in [*x, frame.apply(x), frame.apply_adjoint(x)] {
        if let Some(u) = reduce(&span, v, 1e-9) {
            span.push(u);
        }
    }
    let mut all = span.clone();
    let mut complement = Vec::new();
    for j in 0..4 {
        if all.len() == 4 {
            break;
        }
        if let Some(u) = reduce(&all, V4::from_fn(|i, _| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }), 1e-6) {
            all.push(u);
            complement.push(u);
        }
    }
    (span, complement)
}

fn reduce(basis: &[V4], mut v: V4, drop_tol: f64) -> Option<V4> {
    let scale = v.norm();
    for _ in 0..2 {
        for b in basis {
            v -= b * b.dotc(&v);
        }
    }
    let n = v.norm();
    (n > drop_tol * scale.max(1e-300)).then(|| v / c(n, 0.0))
}

/// `⟨ξ₂|U′ξ₂⟩` for the unique complement direction, computed as
/// `tr U′ − Σ_span ⟨q|U′q⟩` so that it is smooth in the angles.
fn complement_residual(frame: &Frame, p: &[f64; 4]) -> Option<C64> {
    let x = frame.xi(p);
    let (span, _) = split(frame, &x);
    if span.len() != 3 {
        return None;
    }
    let tr: C64 = frame.z.iter().sum();
    Some(span.iter().fold(tr, |acc, q| acc - q.dotc(&frame.apply(q))))
}

/// Gauss–Newton on the two real equations `Re r = Im r = 0` over the four
/// angles of `ξ₁`, using minimum-norm steps.
fn refine(frame: &Frame, mut p: [f64; 4]) -> Option<[f64; 4]> {
    const H: f64 = 1e-7;
    let mut r = complement_residual(frame, &p)?;
    for _ in 0..60 {
        if r.norm() < 1e-14 {
            return Some(p);
        }
        let mut jac = Matrix2x4::<f64>::zeros();
        for i in 0..4 {
            let (mut plus, mut minus) = (p, p);
            plus[i] += H;
            minus[i] -= H;
            let d = (complement_residual(frame, &plus)? - complement_residual(frame, &minus)?) / (2.0 * H);
            jac[(0, i)] = d.re;
            jac[(1, i)] = d.im;
        }
        let jjt: Matrix2<f64> = jac * jac.transpose();
        let rhs = jjt.try_inverse()? * Vector2::new(r.re, r.im);
        let step = jac.transpose() * rhs;
        let mut t = 1.0;
        loop {
            let trial: [f64; 4] = std::array::from_fn(|i| p[i] - t * step[i]);
            if let Some(rt) = complement_residual(frame, &trial) {
                if rt.norm() < r.norm() {
                    p = trial;
                    r = rt;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-6 {
                return (r.norm() < 1e-12).then_some(p);
            }
        }
    }
    (r.norm() < 1e-12).then_some(p)
}

/// Unit `y = y₀u + y₁v` with `⟨y|U′y⟩ = 0` inside a two-dimensional
/// complement `{u, v}`, via the Bloch sphere. `phi` picks a point when the
/// solution set is a whole circle.
fn bloch_solutions(frame: &Frame, u: &V4, v: &V4, phi: f64) -> Vec<V4> {
    let (uu, uv) = (u.dotc(&frame.apply(u)), u.dotc(&frame.apply(v)));
    let (vu, vv) = (v.dotc(&frame.apply(u)), v.dotc(&frame.apply(v)));
    // M = H1 + i·H2 with H1, H2 Hermitian; H = h0·1 + h·σ
    let pauli_coords = |m00: C64, m01: C64, m11: C64| -> (f64, nalgebra::Vector3<f64>) {
        ((m00.re + m11.re) / 2.0, nalgebra::Vector3::new(m01.re, -m01.im, (m00.re - m11.re) / 2.0))
    };
    let half = c(0.5, 0.0);
    let h1 = pauli_coords(uu.re.into(), (uv + vu.conj()) * half, vv.re.into());
    let h2 = pauli_coords(uu.im.into(), (uv - vu.conj()) * c(0.0, -0.5), vv.im.into());
    let (a, b) = (h1.1, h2.1);
    let cross = a.cross(&b);
    let mut normals = Vec::new();
    if cross.norm() > 1e-9 * (a.norm() * b.norm()).max(1e-300) {
        // n = n0 + t·w with n0 ∈ span{a, b}
        let g = Matrix2::new(a.dot(&a), a.dot(&b), a.dot(&b), b.dot(&b));
        let Some(coef) = g.try_inverse().map(|gi| gi * Vector2::new(-h1.0, -h2.0)) else {
            return Vec::new();
        };
        let n0 = a * coef[0] + b * coef[1];
        let rest = 1.0 - n0.norm_squared();
        if rest < -1e-12 {
            return Vec::new();
        }
        let t = rest.max(0.0).sqrt() / cross.norm();
        normals.push(n0 + cross * t);
        normals.push(n0 - cross * t);
    } else {
        let (h, h0) = if a.norm() >= b.norm() { (a, h1.0) } else { (b, h2.0) };
        if h.norm() < 1e-300 {
            return Vec::new();
        }
        let axis = h / h.norm();
        let s = -h0 / h.norm();
        if s.abs() > 1.0 + 1e-12 {
            return Vec::new();
        }
        let s = s.clamp(-1.0, 1.0);
        let helper = if axis.x.abs() < 0.9 { nalgebra::Vector3::x() } else { nalgebra::Vector3::y() };
        let m1 = (helper - axis * axis.dot(&helper)).normalize();
        let m2 = axis.cross(&m1);
        let radial = (1.0 - s * s).sqrt();
        normals.push(axis * s + (m1 * phi.cos() + m2 * phi.sin()) * radial);
    }
    normals
        .into_iter()
        .map(|n| {
            let theta = n.z.clamp(-1.0, 1.0).acos();
            let ph = n.y.atan2(n.x);
            u * c((theta / 2.0).cos(), 0.0) + v * C64::from_polar((theta / 2.0).sin(), ph)
        })
        .collect()
}

/// Rank-2 codes `P` with `PUP = λP` for a 4×4 unitary `U` with four
/// distinct eigenvalues, `λ` being the single point of `Λ₂(U)`.
pub fn twoqubit_generic_solve(u: &CMatrix, sweep: &SweepSpec, seed: u64, tol: &ToleranceConfig) -> Result<Vec<CodeProjection>> {
    if sweep.points == 0 || sweep.max_codes == 0 {
        return Err(Error::EmptySweep);
    }
    let frame = Frame::new(u, tol)?;
    let ops = [identity(4), u.clone()];
    let mut found: Vec<CodeProjection> = Vec::new();
    for i in 0..sweep.points {
        let start = if i == 0 {
            [0.0; 4]
        } else {
            let mut rng = seeded_rng(seed, i as u64);
            [rng.random_range(0.0..FRAC_PI_2), rng.random_range(0.0..TAU), rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)]
        };
        for (x1, x2) in candidates(&frame, start) {
            let cols = [frame.to_standard(&x1), frame.to_standard(&x2)];
            let p = Projection::from_orthonormal_columns(columns_to_matrix(4, &cols));
            if found.iter().any(|f| f.projection.distance(&p) < 1e-6) {
                continue;
            }
            match scalar_compression_check(u, &p, tol.eps_scalar)? {
                Some(mu) if (mu - frame.lambda).norm() <= tol.eps_scalar => {
                    found.push(CodeProjection::for_operators(p, &ops)?);
                    if found.len() >= sweep.max_codes {
                        return Ok(found);
                    }
                }
                _ => {}
            }
        }
    }
    Ok(found)
}

fn candidates(frame: &Frame, start: [f64; 4]) -> Vec<(V4, V4)> {
    let (span, complement) = split(frame, &frame.xi(&start));
    if span.len() == 2 && complement.len() == 2 {
        let x1 = frame.xi(&start);
        return bloch_solutions(frame, &complement[0], &complement[1], start[3]).into_iter().map(|x2| (x1, x2)).collect();
    }
    let Some(p) = refine(frame, start) else {
        return Vec::new();
    };
    let x1 = frame.xi(&p);
    let (span, complement) = split(frame, &x1);
    if span.len() != 3 || complement.len() != 1 {
        return Vec::new();
    }
    vec![(x1, complement[0])]
}
