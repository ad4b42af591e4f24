use serde::{Deserialize, Serialize};

use super::CodeProjection;
use crate::channel::{ginibre, seeded_rng};
use crate::matcore::{c, compression_residual, ensure_square, identity, trace, CMatrix, Projection, ToleranceConfig};
use crate::numrange::hermitian_range;
use crate::{Error, Result};

/// Random restarts followed by local refinement of the best of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub trials: usize,
    pub refine_starts: usize,
    pub max_iters: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { trials: 100_000, refine_starts: 16, max_iters: 300 }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub code: Option<CodeProjection>,
    /// Some Hermitian family member has an empty rank-k range, so no code
    /// of this rank exists.
    pub proven_empty: bool,
    /// Square root of the smallest objective value reached.
    pub best_residual: f64,
    pub trials: usize,
}

/// Searches for a rank-k projection compressing every `U_i†U_j` to a
/// scalar, i.e. a common correctable code of the randomized unitary channel
/// built from `unitaries`. Absence of a code is a search outcome unless
/// `proven_empty` is set.
pub fn multi_unitary_common_code(
    unitaries: &[CMatrix],
    k: usize,
    budget: &SearchBudget,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<SearchOutcome> {
    let first = unitaries.first().ok_or_else(|| Error::BadParameter("no unitaries given".into()))?;
    let n = ensure_square(first)?;
    for u in unitaries {
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: u.nrows().max(u.ncols()) });
        }
    }
    if k == 0 || k > n {
        return Err(Error::BadRank { k, n });
    }

    let mut products = Vec::new();
    let mut members = Vec::new();
    for i in 0..unitaries.len() {
        for j in i + 1..unitaries.len() {
            let a = unitaries[i].adjoint() * &unitaries[j];
            members.push(&a + a.adjoint());
            members.push((&a - a.adjoint()) * c(0.0, 1.0));
            products.push(a);
        }
    }
    for h in &members {
        if hermitian_range(h, k, tol)?.is_empty() {
            return Ok(SearchOutcome { code: None, proven_empty: true, best_residual: f64::INFINITY, trials: 0 });
        }
    }
    if members.is_empty() {
        let p = Projection::from_orthonormal_columns(identity(n).columns(0, k).into_owned());
        return Ok(SearchOutcome { code: Some(CodeProjection::for_operators(p, unitaries)?), proven_empty: false, best_residual: 0.0, trials: 0 });
    }

    let draw = |i: usize| -> CMatrix { ginibre(n, k, &mut seeded_rng(seed, i as u64)).qr().q() };
    let mut ranked: Vec<(f64, usize)> = (0..budget.trials).map(|i| (objective(&members, &draw(i), k), i)).collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut best = ranked.first().map_or(f64::INFINITY, |r| r.0);
    for &(_, i) in ranked.iter().take(budget.refine_starts) {
        let (q, f) = refine(&members, draw(i), k, budget.max_iters);
        best = best.min(f);
        if f.sqrt() <= 0.1 * tol.eps_scalar {
            let p = Projection::from_orthonormal_columns(q);
            let mut ok = true;
            for a in &products {
                ok &= compression_residual(a, &p)?.1 <= tol.eps_scalar;
            }
            if ok {
                return Ok(SearchOutcome {
                    code: Some(CodeProjection::for_operators(p, unitaries)?),
                    proven_empty: false,
                    best_residual: f.sqrt(),
                    trials: budget.trials,
                });
            }
        }
    }
    Ok(SearchOutcome { code: None, proven_empty: false, best_residual: best.sqrt(), trials: budget.trials })
}

/// `Σ_H ‖Q†HQ − (tr(Q†HQ)/k)·1‖²_F`
fn objective(members: &[CMatrix], q: &CMatrix, k: usize) -> f64 {
    members.iter().map(|h| deviation(h, q, k).norm_squared()).sum()
}

fn deviation(h: &CMatrix, q: &CMatrix, k: usize) -> CMatrix {
    let mut m = q.adjoint() * (h * q);
    let mean = trace(&m) / k as f64;
    for d in 0..k {
        m[(d, d)] -= mean;
    }
    m
}

/// Riemannian gradient descent on the Grassmannian with Barzilai-Borwein
/// steps, Armijo backtracking and a QR retraction.
fn refine(members: &[CMatrix], mut q: CMatrix, k: usize, max_iters: usize) -> (CMatrix, f64) {
    let grad = |q: &CMatrix| -> CMatrix {
        let g = members.iter().fold(CMatrix::zeros(q.nrows(), k), |acc, h| acc + h * q * deviation(h, q, k) * c(4.0, 0.0));
        &g - q * (q.adjoint() * &g)
    };
    let mut f = objective(members, &q, k);
    let mut g = grad(&q);
    let mut step = 0.1;
    for _ in 0..max_iters {
        let gn2 = g.norm_squared();
        if f < 1e-28 || gn2 < 1e-30 {
            break;
        }
        let mut t = step;
        let (qn, fnew) = loop {
            let cand = (&q - &g * c(t, 0.0)).qr().q();
            let fc = objective(members, &cand, k);
            if fc <= f - 1e-4 * t * gn2 || t < 1e-16 {
                break (cand, fc);
            }
            t *= 0.5;
        };
        if fnew >= f {
            break;
        }
        let gnew = grad(&qn);
        let s = &qn - &q;
        let y = &gnew - &g;
        let sy = s.dotc(&y).re;
        step = if sy.abs() > 1e-300 { (s.norm_squared() / sy.abs()).clamp(1e-8, 1e3) } else { 1.0 };
        q = qn;
        f = fnew;
        g = gnew;
    }
    (q, f)
}
