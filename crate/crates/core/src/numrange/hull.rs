use itertools::Itertools;

use crate::matcore::{ensure_normal, normal_eigendecomposition, CMatrix, ToleranceConfig, C64};
use crate::{Error, Result};

/// Largest number of `(N+1−k)`-point subsets enumerated by default.
pub const DEFAULT_HULL_CAP: u128 = 1_000_000;

/// The family of convex hulls whose intersection bounds `Λ_k` of a normal
/// operator: one hull per `(N+1−k)`-point sub-multiset of the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct HullBound {
    pub k: usize,
    pub subset_size: usize,
    pub spectrum: Vec<C64>,
}

impl HullBound {
    pub fn new(spectrum: Vec<C64>, k: usize) -> Result<Self> {
        let n = spectrum.len();
        if k == 0 || k > n {
            return Err(Error::BadRank { k, n });
        }
        Ok(Self { k, subset_size: n + 1 - k, spectrum })
    }

    /// `C(N, k−1)`, the number of hulls.
    pub fn subset_count(&self) -> u128 {
        binomial(self.spectrum.len() as u128, (self.k - 1) as u128)
    }

    /// True iff `z` is within `tol` of every hull.
    pub fn contains(&self, z: C64, tol: f64) -> bool {
        self.spectrum
            .iter()
            .copied()
            .combinations(self.subset_size)
            .all(|gamma| hull_signed_distance(&gamma, z) <= tol)
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Necessary condition for `λ ∈ Λ_k(A)`, `A` normal: `λ` lies in the convex
/// hull of every `(N+1−k)`-point subset of the spectrum (with
/// multiplicity). `false` proves `λ ∉ Λ_k(A)`.
pub fn normal_hull_membership(a: &CMatrix, k: usize, lambda: C64, tol: &ToleranceConfig) -> Result<bool> {
    normal_hull_membership_with_cap(a, k, lambda, tol, DEFAULT_HULL_CAP)
}

pub fn normal_hull_membership_with_cap(
    a: &CMatrix,
    k: usize,
    lambda: C64,
    tol: &ToleranceConfig,
    cap: u128,
) -> Result<bool> {
    let n = ensure_normal(a, tol)?;
    if k == 0 || k > n {
        return Err(Error::BadRank { k, n });
    }
    let bound = HullBound::new(normal_eigendecomposition(a, tol)?.values().to_vec(), k)?;
    let count = bound.subset_count();
    if count > cap {
        return Err(Error::CombinatorialBlowup { count, cap });
    }
    Ok(bound.contains(lambda, tol.eps_scalar))
}

fn cross(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Counter-clockwise convex hull (Andrew's monotone chain) without
/// collinear points. Returns 1 or 2 points for degenerate input.
pub fn convex_hull(points: &[C64]) -> Vec<C64> {
    let mut pts: Vec<C64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<C64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &C64>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        // all collinear: keep the two extremes
        return vec![pts[0], pts[pts.len() - 1]];
    }
    hull
}

/// Signed distance from `z` to the convex hull of `points`: negative inside
/// (depth below the boundary), positive outside.
pub fn hull_signed_distance(points: &[C64], z: C64) -> f64 {
    let hull = convex_hull(points);
    match hull.len() {
        0 => f64::INFINITY,
        1 => (z - hull[0]).norm(),
        2 => super::segment_distance(hull[0], hull[1], z),
        m => {
            let mut inside = true;
            let mut dist = f64::INFINITY;
            for i in 0..m {
                let (a, b) = (hull[i], hull[(i + 1) % m]);
                if cross(a, b, z) < 0.0 {
                    inside = false;
                }
                dist = dist.min(super::segment_distance(a, b, z));
            }
            if inside {
                -dist
            } else {
                dist
            }
        }
    }
}
