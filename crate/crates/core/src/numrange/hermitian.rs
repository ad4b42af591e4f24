use super::RangeResult;
use crate::matcore::{c, columns_to_matrix, hermitian_eigendecomposition, CMatrix, CVector, Projection, Spectrum, ToleranceConfig, C64};
use crate::{Error, Result};

/// `Λ_k(H) = [a_k, a_{N−k+1}]` for ascending eigenvalues `a_1 ≤ … ≤ a_N`.
pub fn hermitian_range(h: &CMatrix, k: usize, tol: &ToleranceConfig) -> Result<RangeResult> {
    let eig = hermitian_eigendecomposition(h, tol)?;
    range_from_spectrum(&eig, k, tol)
}

fn range_from_spectrum(eig: &Spectrum, k: usize, tol: &ToleranceConfig) -> Result<RangeResult> {
    let n = eig.len();
    if k == 0 || k > n {
        return Err(Error::BadRank { k, n });
    }
    let lo = eig.value(k - 1).re;
    let hi = eig.value(n - k).re;
    Ok(if hi - lo > tol.eps_degenerate {
        RangeResult::RealInterval { lo, hi }
    } else if hi - lo >= -tol.eps_degenerate {
        RangeResult::Point { value: c(0.5 * (lo + hi), 0.0), case: None }
    } else {
        RangeResult::Empty
    })
}

/// Rank-k projection `P` with `PHP = λP`.
///
/// Eigenvectors below and above `λ` are paired so that each combined vector
/// has Rayleigh quotient exactly `λ`: with `2k ≤ N` the pairs are
/// `(ψ_j, ψ_{N−k+j})`; with `2k > N` the middle `2k − N` eigenvectors (all
/// equal to `λ`) are taken as they are and the outer ones are paired as
/// `(ψ_j, ψ_{k+j})`.
pub fn hermitian_range_projection(h: &CMatrix, k: usize, lambda: f64, tol: &ToleranceConfig) -> Result<Projection> {
    let eig = hermitian_eigendecomposition(h, tol)?;
    let n = eig.len();
    let range = range_from_spectrum(&eig, k, tol)?;
    if range.is_empty() {
        // only possible for 2k > N
        return Err(Error::BadRank { k, n });
    }
    if !range.contains(c(lambda, 0.0), tol.eps_scalar) {
        return Err(Error::ValueOutsideRange { value: format!("{lambda}"), detail: format!("{range:?}") });
    }
    let target = match range {
        RangeResult::RealInterval { lo, hi } => lambda.clamp(lo, hi),
        RangeResult::Point { value, .. } => value.re,
        _ => unreachable!("Hermitian ranges are intervals or points"),
    };

    let a = eig.real_values();
    let mut columns: Vec<CVector> = Vec::with_capacity(k);
    let mut pair = |lower: usize, upper: usize| {
        let gap = a[upper] - a[lower];
        let s = if gap > 0.0 { ((target - a[lower]) / gap).clamp(0.0, 1.0) } else { 0.0 };
        columns.push(eig.vector(lower) * C64::new((1.0 - s).sqrt(), 0.0) + eig.vector(upper) * C64::new(s.sqrt(), 0.0));
    };
    if 2 * k <= n {
        for j in 0..k {
            pair(j, n - k + j);
        }
    } else {
        for j in 0..n - k {
            pair(j, k + j);
        }
        for j in n - k..k {
            columns.push(eig.vector(j));
        }
    }
    Ok(Projection::from_orthonormal_columns(columns_to_matrix(n, &columns)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ginibre, pauli, seeded_rng};
    use crate::matcore::{basis_vector, compression_residual, diag_real, scalar_compression_check};
    use proptest::prelude::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        let g = ginibre(n, n, &mut seeded_rng(seed, 0));
        &g + g.adjoint()
    }

    #[test]
    fn diag_1234_ranges() {
        let s = diag_real(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(hermitian_range(&s, 1, &tol()).unwrap(), RangeResult::RealInterval { lo: 1.0, hi: 4.0 });
        assert_eq!(hermitian_range(&s, 2, &tol()).unwrap(), RangeResult::RealInterval { lo: 2.0, hi: 3.0 });
        assert_eq!(hermitian_range(&s, 3, &tol()).unwrap(), RangeResult::Empty);
        assert_eq!(hermitian_range(&s, 4, &tol()).unwrap(), RangeResult::Empty);
        assert!(matches!(hermitian_range(&s, 5, &tol()), Err(Error::BadRank { .. })));
        assert!(matches!(hermitian_range(&s, 0, &tol()), Err(Error::BadRank { .. })));
    }

    #[test]
    fn pauli_z_ranges() {
        assert_eq!(hermitian_range(&pauli::z(), 1, &tol()).unwrap(), RangeResult::RealInterval { lo: -1.0, hi: 1.0 });
        assert_eq!(hermitian_range(&pauli::z(), 2, &tol()).unwrap(), RangeResult::Empty);
        for n in 1..=4 {
            let z1 = pauli::z1(n);
            let half = 1usize << (n - 1);
            for k in 1..=2 * half {
                let r = hermitian_range(&z1, k, &tol()).unwrap();
                if k <= half {
                    assert_eq!(r, RangeResult::RealInterval { lo: -1.0, hi: 1.0 }, "n={n} k={k}");
                } else {
                    assert!(r.is_empty());
                }
            }
        }
    }

    #[test]
    fn scalar_matrix_full_rank_point() {
        let s = diag_real(&[2.5; 3]);
        assert_eq!(hermitian_range(&s, 3, &tol()).unwrap(), RangeResult::Point { value: c(2.5, 0.0), case: None });
    }

    #[test]
    fn pairing_hits_midpoint() {
        let s = diag_real(&[1.0, 2.0, 3.0, 4.0]);
        let p = hermitian_range_projection(&s, 2, 2.5, &tol()).unwrap();
        let (lambda, residual) = compression_residual(&s, &p).unwrap();
        assert!(residual <= 1e-9);
        assert!((lambda - c(2.5, 0.0)).norm() <= 1e-12);
        // pairs (ψ1, ψ3) and (ψ2, ψ4) for the standard basis
        let b = p.basis();
        assert!(b[(1, 0)].norm() < 1e-15 && b[(3, 0)].norm() < 1e-15);
        assert!(b[(0, 1)].norm() < 1e-15 && b[(2, 1)].norm() < 1e-15);
    }

    #[test]
    fn z1_zero_code_mixes_eigenspaces() {
        let z1 = pauli::z1(2);
        let p = hermitian_range_projection(&z1, 2, 0.0, &tol()).unwrap();
        assert_eq!(scalar_compression_check(&z1, &p, 1e-9).unwrap().map(|z| z.norm() < 1e-12), Some(true));
        let plus = projection_from(&[0, 1]);
        let minus = projection_from(&[2, 3]);
        // each basis vector has equal weight on both eigenspaces
        for j in 0..2 {
            let v = p.basis().column(j).into_owned();
            assert!(((plus.clone() * &v).norm_squared() - 0.5).abs() < 1e-12);
            assert!(((minus.clone() * &v).norm_squared() - 0.5).abs() < 1e-12);
        }
    }

    fn projection_from(idx: &[usize]) -> CMatrix {
        idx.iter().fold(CMatrix::zeros(4, 4), |acc, &i| acc + basis_vector(4, i) * basis_vector(4, i).adjoint())
    }

    #[test]
    fn outside_value_rejected() {
        let s = diag_real(&[1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(hermitian_range_projection(&s, 2, 3.5, &tol()), Err(Error::ValueOutsideRange { .. })));
        assert!(matches!(hermitian_range_projection(&s, 3, 2.5, &tol()), Err(Error::BadRank { .. })));
    }

    #[test]
    fn singleton_above_half_rank() {
        // eigenvalue 0 with multiplicity 2 = 2k − N for N = 5, k = 3... plus pairing
        let s = diag_real(&[-2.0, 0.0, 0.0, 1.0, 5.0]);
        let r = hermitian_range(&s, 3, &tol()).unwrap();
        assert_eq!(r, RangeResult::Point { value: c(0.0, 0.0), case: None });
        let p = hermitian_range_projection(&s, 3, 0.0, &tol()).unwrap();
        assert_eq!(p.rank(), 3);
        assert!(compression_residual(&s, &p).unwrap().1 <= 1e-12);
    }

    #[test]
    fn endpoints_on_random_matrices() {
        for seed in 0..30 {
            let n = 4 + (seed as usize % 5);
            let h = random_hermitian(n, seed);
            for k in 1..=n / 2 {
                let RangeResult::RealInterval { lo, hi } = hermitian_range(&h, k, &tol()).unwrap() else {
                    panic!("generic spectrum gives an interval");
                };
                for lambda in [lo, hi] {
                    let p = hermitian_range_projection(&h, k, lambda, &tol()).unwrap();
                    assert!(scalar_compression_check(&h, &p, 1e-9).unwrap().is_some());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn affine_covariance(seed in 0u64..200, alpha in -3.0f64..3.0, beta in -2.0f64..2.0, k in 1usize..4) {
            prop_assume!(alpha.abs() > 1e-3);
            let h = random_hermitian(6, seed);
            let shifted = &h * c(alpha, 0.0) + CMatrix::identity(6, 6) * c(beta, 0.0);
            let base = hermitian_range(&h, k, &tol()).unwrap();
            let moved = hermitian_range(&shifted, k, &tol()).unwrap();
            match (base, moved) {
                (RangeResult::RealInterval { lo, hi }, RangeResult::RealInterval { lo: lo2, hi: hi2 }) => {
                    let (elo, ehi) = if alpha > 0.0 { (alpha * lo + beta, alpha * hi + beta) } else { (alpha * hi + beta, alpha * lo + beta) };
                    prop_assert!((lo2 - elo).abs() <= 1e-9 * (1.0 + elo.abs()));
                    prop_assert!((hi2 - ehi).abs() <= 1e-9 * (1.0 + ehi.abs()));
                }
                (a, b) => prop_assert!(false, "unexpected shapes {:?} {:?}", a, b),
            }
        }

        #[test]
        fn inclusion_chain(seed in 0u64..200, n in 2usize..9) {
            let h = random_hermitian(n, seed);
            for k in 1..n {
                let outer = hermitian_range(&h, k, &tol()).unwrap();
                let inner = hermitian_range(&h, k + 1, &tol()).unwrap();
                prop_assert!(inner.is_subset_of(&outer, 1e-12));
            }
        }

        #[test]
        fn constructed_projection_compresses(seed in 0u64..200, t in 0.0f64..=1.0) {
            let n = 4 + (seed as usize % 5);
            let h = random_hermitian(n, seed);
            for k in 1..=n / 2 {
                if let RangeResult::RealInterval { lo, hi } = hermitian_range(&h, k, &tol()).unwrap() {
                    let lambda = lo + t * (hi - lo);
                    let p = hermitian_range_projection(&h, k, lambda, &tol()).unwrap();
                    prop_assert!(p.residual() <= 1e-10);
                    prop_assert_eq!(p.rank(), k);
                    let got = scalar_compression_check(&h, &p, 1e-9).unwrap();
                    prop_assert!(got.is_some());
                    prop_assert!((got.unwrap() - C64::new(lambda, 0.0)).norm() <= 1e-9 * h.norm().max(1.0));
                }
            }
        }
    }
}
