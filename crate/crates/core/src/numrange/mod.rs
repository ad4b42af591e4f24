//! Rank-k numerical ranges
//! `Λ_k(σ) = { λ ∈ ℂ : PσP = λP for some rank-k projection P }`
//! and constructive projections for each compression-value.

mod hermitian;
mod hull;
mod unitary;

use serde::{Deserialize, Serialize};

use crate::matcore::C64;
use crate::{Error, Result};

pub use hermitian::{hermitian_range, hermitian_range_projection};
pub use hull::{convex_hull, hull_signed_distance, normal_hull_membership, normal_hull_membership_with_cap, HullBound, DEFAULT_HULL_CAP};
pub use unitary::{
    chord_intersection, chord_sine, unitary4_geometry, unitary4_rank2_projection, unitary4_rank2_range, unitary_rank2_any_dim,
    UnitaryGeometry,
};

/// Degeneracy pattern of a 4×4 unitary spectrum: (a) four distinct
/// eigenvalues, (b) one double, (c) two doubles, (d) one triple, (e) scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitaryCase {
    A,
    B,
    C,
    D,
    E,
}

impl UnitaryCase {
    pub fn label(self) -> char {
        match self {
            UnitaryCase::A => 'a',
            UnitaryCase::B => 'b',
            UnitaryCase::C => 'c',
            UnitaryCase::D => 'd',
            UnitaryCase::E => 'e',
        }
    }
}

/// Shape of `Λ_k(σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RangeResult {
    Empty,
    Point {
        value: C64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        case: Option<UnitaryCase>,
    },
    /// `lo < hi`; a degenerate interval is reported as a point.
    #[serde(rename = "interval")]
    RealInterval { lo: f64, hi: f64 },
    /// Closed segment between two distinct points.
    Segment {
        endpoints: [C64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        case: Option<UnitaryCase>,
    },
}

impl RangeResult {
    pub fn is_empty(&self) -> bool {
        matches!(self, RangeResult::Empty)
    }

    pub fn case(&self) -> Option<UnitaryCase> {
        match self {
            RangeResult::Point { case, .. } | RangeResult::Segment { case, .. } => *case,
            _ => None,
        }
    }

    /// Distance from `z` to the set; `∞` for the empty set.
    pub fn distance(&self, z: C64) -> f64 {
        match *self {
            RangeResult::Empty => f64::INFINITY,
            RangeResult::Point { value, .. } => (z - value).norm(),
            RangeResult::RealInterval { lo, hi } => segment_distance(C64::new(lo, 0.0), C64::new(hi, 0.0), z),
            RangeResult::Segment { endpoints: [a, b], .. } => segment_distance(a, b, z),
        }
    }

    pub fn contains(&self, z: C64, tol: f64) -> bool {
        self.distance(z) <= tol
    }

    /// `self ⊆ other` up to `tol`. Every shape here is convex, so checking
    /// the extreme points suffices.
    pub fn is_subset_of(&self, other: &RangeResult, tol: f64) -> bool {
        match *self {
            RangeResult::Empty => true,
            RangeResult::Point { value, .. } => other.contains(value, tol),
            RangeResult::RealInterval { lo, hi } => {
                other.contains(C64::new(lo, 0.0), tol) && other.contains(C64::new(hi, 0.0), tol)
            }
            RangeResult::Segment { endpoints: [a, b], .. } => other.contains(a, tol) && other.contains(b, tol),
        }
    }

    /// Representative compression-values: the point, or `samples` evenly
    /// spaced values along an interval or segment (endpoints included).
    pub fn sample(&self, samples: usize) -> Vec<C64> {
        let line = |a: C64, b: C64| -> Vec<C64> {
            match samples {
                0 => Vec::new(),
                1 => vec![(a + b) * 0.5],
                s => (0..s).map(|i| a + (b - a) * (i as f64 / (s - 1) as f64)).collect(),
            }
        };
        match *self {
            RangeResult::Empty => Vec::new(),
            RangeResult::Point { value, .. } => vec![value],
            RangeResult::RealInterval { lo, hi } => line(C64::new(lo, 0.0), C64::new(hi, 0.0)),
            RangeResult::Segment { endpoints: [a, b], .. } => line(a, b),
        }
    }
}

pub(crate) fn segment_distance(a: C64, b: C64, z: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

/// What the dimension count alone says about `Λ_k` of an `N × N` operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShapeConstraint {
    /// `2k ≤ N`: no constraint from counting.
    Unconstrained,
    /// `2k > N`: empty or a single eigenvalue of geometric multiplicity at
    /// least `2k − N`.
    EmptyOrSingleton { min_geometric_multiplicity: usize },
    /// `k = N`: non-empty exactly for scalar operators.
    ScalarOnly,
}

pub fn range_shape_constraints(n: usize, k: usize) -> Result<ShapeConstraint> {
    if k == 0 || k > n {
        return Err(Error::BadRank { k, n });
    }
    Ok(if k == n {
        ShapeConstraint::ScalarOnly
    } else if 2 * k > n {
        ShapeConstraint::EmptyOrSingleton { min_geometric_multiplicity: 2 * k - n }
    } else {
        ShapeConstraint::Unconstrained
    })
}
