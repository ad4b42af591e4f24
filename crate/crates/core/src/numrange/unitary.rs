use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{RangeResult, UnitaryCase};
use crate::matcore::{
    c, cluster_eigenvalues, columns_to_matrix, ensure_unitary, normal_eigendecomposition, principal_arg, scalar_compression_check,
    CMatrix, CVector, Cluster, Projection, Spectrum, ToleranceConfig, C64,
};
use crate::{Error, Result};

/// Largest number of distinct eigenvalues searched exhaustively for the best
/// quadruple.
const EXHAUSTIVE_QUADRUPLES: usize = 12;

/// Intersection of the chord `z₁z₃` with the chord `z₂z₄` for four distinct
/// unimodular points in strictly increasing argument order.
pub fn chord_intersection(z: [C64; 4], tol: &ToleranceConfig) -> Result<C64> {
    check_chord_points(&z, tol)?;
    let d13 = z[2] - z[0];
    let d24 = z[3] - z[1];
    let r = z[1] - z[0];
    // z₁ + s·d13 = z₂ + t·d24
    let det = (d13.conj() * d24).im;
    if det.abs() <= tol.eps_scalar {
        return Err(Error::NumericalFailure(format!("chord system singular (det {det:.3e})")));
    }
    let s = (r.conj() * d24).im / det;
    Ok(z[0] + d13 * s)
}

fn check_chord_points(z: &[C64; 4], tol: &ToleranceConfig) -> Result<()> {
    if z.iter().any(|w| !w.re.is_finite() || !w.im.is_finite() || (w.norm() - 1.0).abs() > tol.eps_degenerate) {
        return Err(Error::DegenerateChords);
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if (z[i] - z[j]).norm() <= tol.eps_degenerate {
                return Err(Error::DegenerateChords);
            }
        }
    }
    if !z.windows(2).all(|w| principal_arg(w[0]) < principal_arg(w[1])) {
        return Err(Error::DegenerateChords);
    }
    Ok(())
}

/// `|sin|` of the angle between the chords `z₁z₃` and `z₂z₄`.
pub fn chord_sine(z: [C64; 4]) -> f64 {
    let d13 = z[2] - z[0];
    let d24 = z[3] - z[1];
    (d13.conj() * d24).im.abs() / (d13.norm() * d24.norm())
}

/// Plot data for a 4×4 unitary: clustered spectrum in argument order, the
/// chords that define `Λ₂` and the range itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryGeometry {
    pub eigenvalues: Vec<C64>,
    pub multiplicities: Vec<usize>,
    pub chords: Vec<[C64; 2]>,
    pub range: RangeResult,
}

struct Analysis {
    spectrum: Spectrum,
    clusters: Vec<Cluster>,
    case: UnitaryCase,
    range: RangeResult,
}

fn unimodular_clusters(spectrum: &Spectrum, tol: &ToleranceConfig) -> Vec<Cluster> {
    let mut clusters = cluster_eigenvalues(spectrum, tol.eps_degenerate);
    for cl in &mut clusters {
        cl.value /= cl.value.norm();
    }
    clusters.sort_by(|a, b| principal_arg(a.value).total_cmp(&principal_arg(b.value)));
    clusters
}

fn analyze4(u: &CMatrix, tol: &ToleranceConfig) -> Result<Analysis> {
    let n = ensure_unitary(u, tol)?;
    if n != 4 {
        return Err(Error::WrongDimension { expected: 4, found: n });
    }
    let spectrum = normal_eigendecomposition(u, tol)?;
    let clusters = unimodular_clusters(&spectrum, tol);
    let mult: Vec<usize> = clusters.iter().map(|c| c.multiplicity).collect();
    let (case, range) = match mult.as_slice() {
        [1, 1, 1, 1] => {
            let z = [clusters[0].value, clusters[1].value, clusters[2].value, clusters[3].value];
            (UnitaryCase::A, RangeResult::Point { value: chord_intersection(z, tol)?, case: Some(UnitaryCase::A) })
        }
        [_, _, _] => {
            let double = clusters.iter().find(|c| c.multiplicity == 2).expect("three clusters of four values");
            (UnitaryCase::B, RangeResult::Point { value: double.value, case: Some(UnitaryCase::B) })
        }
        [2, 2] => (
            UnitaryCase::C,
            RangeResult::Segment { endpoints: [clusters[0].value, clusters[1].value], case: Some(UnitaryCase::C) },
        ),
        [_, _] => {
            let triple = clusters.iter().find(|c| c.multiplicity == 3).expect("3 + 1 split");
            (UnitaryCase::D, RangeResult::Point { value: triple.value, case: Some(UnitaryCase::D) })
        }
        [_] => (UnitaryCase::E, RangeResult::Point { value: clusters[0].value, case: Some(UnitaryCase::E) }),
        _ => unreachable!("four eigenvalues form one to four clusters"),
    };
    Ok(Analysis { spectrum, clusters, case, range })
}

/// `Λ₂(U)` of a 4×4 unitary, classified by the degeneracy of its spectrum.
pub fn unitary4_rank2_range(u: &CMatrix, tol: &ToleranceConfig) -> Result<RangeResult> {
    Ok(analyze4(u, tol)?.range)
}

pub fn unitary4_geometry(u: &CMatrix, tol: &ToleranceConfig) -> Result<UnitaryGeometry> {
    let an = analyze4(u, tol)?;
    let eigenvalues: Vec<C64> = an.clusters.iter().map(|c| c.value).collect();
    let chords = match an.case {
        UnitaryCase::A => vec![[eigenvalues[0], eigenvalues[2]], [eigenvalues[1], eigenvalues[3]]],
        UnitaryCase::C => vec![[eigenvalues[0], eigenvalues[1]]],
        _ => Vec::new(),
    };
    Ok(UnitaryGeometry {
        multiplicities: an.clusters.iter().map(|c| c.multiplicity).collect(),
        eigenvalues,
        chords,
        range: an.range,
    })
}

/// `cos θ·u + sin θ·w` with `cos²θ·z_u + sin²θ·z_w = λ`, where `λ` lies on
/// the chord from `z_u` to `z_w`.
fn pair(u: &CVector, zu: C64, w: &CVector, zw: C64, lambda: C64, tol: &ToleranceConfig) -> Result<CVector> {
    let ratio = (lambda - zw) / (zu - zw);
    if ratio.im.abs() * (zu - zw).norm() > tol.eps_scalar {
        return Err(Error::NumericalFailure(format!("value {lambda} is off the chord {zu}–{zw}")));
    }
    let a = ratio.re.clamp(0.0, 1.0);
    Ok(u * c(a.sqrt(), 0.0) + w * c((1.0 - a).sqrt(), 0.0))
}

fn projection_for(an: &Analysis, lambda: C64, tol: &ToleranceConfig) -> Result<Projection> {
    if !an.range.contains(lambda, tol.eps_scalar) {
        return Err(Error::ValueOutsideRange { value: format!("{lambda}"), detail: format!("{:?}", an.range) });
    }
    let vec = |i: usize| an.spectrum.vector(i);
    let cl = &an.clusters;
    let columns = match an.case {
        UnitaryCase::A => {
            let target = match an.range {
                RangeResult::Point { value, .. } => value,
                _ => unreachable!(),
            };
            let m = |i: usize| cl[i].members[0];
            vec![
                pair(&vec(m(0)), cl[0].value, &vec(m(2)), cl[2].value, target, tol)?,
                pair(&vec(m(1)), cl[1].value, &vec(m(3)), cl[3].value, target, tol)?,
            ]
        }
        UnitaryCase::C => {
            let target = project_onto_segment(cl[0].value, cl[1].value, lambda);
            vec![
                pair(&vec(cl[0].members[0]), cl[0].value, &vec(cl[1].members[0]), cl[1].value, target, tol)?,
                pair(&vec(cl[0].members[1]), cl[0].value, &vec(cl[1].members[1]), cl[1].value, target, tol)?,
            ]
        }
        UnitaryCase::B | UnitaryCase::D => {
            let big = cl.iter().max_by_key(|c| c.multiplicity).expect("non-empty");
            vec![vec(big.members[0]), vec(big.members[1])]
        }
        UnitaryCase::E => vec![vec(0), vec(1)],
    };
    Ok(Projection::from_orthonormal_columns(columns_to_matrix(4, &columns)))
}

fn project_onto_segment(a: C64, b: C64, z: C64) -> C64 {
    let d = b - a;
    let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    a + d * t
}

/// Rank-2 projection `P` with `PUP = λP` for `λ ∈ Λ₂(U)`, `U` a 4×4
/// unitary, built by pairing eigenvectors across the chords through `λ`.
pub fn unitary4_rank2_projection(u: &CMatrix, lambda: C64, tol: &ToleranceConfig) -> Result<Projection> {
    projection_for(&analyze4(u, tol)?, lambda, tol)
}

/// A point of `Λ₂(U)` and a rank-2 projection realising it, for a unitary of
/// any dimension `N ≥ 4`.
pub fn unitary_rank2_any_dim(u: &CMatrix, tol: &ToleranceConfig) -> Result<(C64, Projection)> {
    let n = ensure_unitary(u, tol)?;
    if n < 4 {
        return Err(Error::WrongDimension { expected: 4, found: n });
    }
    let (lambda, p) = if n == 4 {
        let an = analyze4(u, tol)?;
        let lambda = match an.range {
            RangeResult::Point { value, .. } => value,
            RangeResult::Segment { endpoints, .. } => endpoints[0],
            _ => unreachable!("Λ₂ of a 4×4 unitary is never empty or a real interval"),
        };
        (lambda, projection_for(&an, lambda, tol)?)
    } else {
        any_dim_large(u, n, tol)?
    };
    match scalar_compression_check(u, &p, tol.eps_scalar)? {
        Some(_) => Ok((lambda, p)),
        None => Err(Error::NumericalFailure("constructed projection does not compress to a scalar".into())),
    }
}

fn any_dim_large(u: &CMatrix, n: usize, tol: &ToleranceConfig) -> Result<(C64, Projection)> {
    let spectrum = normal_eigendecomposition(u, tol)?;
    let clusters = unimodular_clusters(&spectrum, tol);
    if let Some(cl) = clusters.iter().find(|c| c.multiplicity >= 2) {
        let cols = [spectrum.vector(cl.members[0]), spectrum.vector(cl.members[1])];
        return Ok((cl.value, Projection::from_orthonormal_columns(columns_to_matrix(n, &cols))));
    }
    let m = clusters.len();
    let candidates: Vec<[usize; 4]> = if m <= EXHAUSTIVE_QUADRUPLES {
        (0..m).combinations(4).map(|q| [q[0], q[1], q[2], q[3]]).collect()
    } else {
        let quartile = |q: usize| ((q * m) as f64 / 4.0).round() as usize % m;
        vec![[quartile(0), quartile(1), quartile(2), quartile(3)]]
    };
    let mut best: Option<([usize; 4], f64)> = None;
    for q in candidates {
        let s = chord_sine(q.map(|i| clusters[i].value));
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((q, s));
        }
    }
    let (q, _) = best.expect("at least four distinct eigenvalues");
    let z = q.map(|i| clusters[i].value);
    let lambda = chord_intersection(z, tol)?;
    let v = |i: usize| spectrum.vector(clusters[q[i]].members[0]);
    let cols = [pair(&v(0), z[0], &v(2), z[2], lambda, tol)?, pair(&v(1), z[1], &v(3), z[3], lambda, tol)?];
    Ok((lambda, Projection::from_orthonormal_columns(columns_to_matrix(n, &cols))))
}
