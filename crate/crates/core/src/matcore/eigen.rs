use nalgebra::{Schur, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{
    c, columns_to_matrix, ensure_hermitian, ensure_normal, fix_phase, hermitian_residual, is_diagonal, is_unitary,
    orthonormalize, principal_arg, CMatrix, CVector, ToleranceConfig, C64,
};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumOrdering {
    AscendingReal,
    AscendingArgument,
}

/// Eigenpairs of a Hermitian or normal operator. Eigenvectors are the
/// columns of [`Spectrum::vectors`], pairwise orthonormal, each with its
/// largest-magnitude entry made real and positive.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<C64>,
    vectors: CMatrix,
    ordering: SpectrumOrdering,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn value(&self, j: usize) -> C64 {
        self.values[j]
    }

    pub fn vector(&self, j: usize) -> CVector {
        self.vectors.column(j).into_owned()
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn ordering(&self) -> SpectrumOrdering {
        self.ordering
    }

    /// `Σ_j z_j |ψ_j⟩⟨ψ_j|`
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.vectors.nrows();
        let mut out = CMatrix::zeros(n, n);
        for (j, z) in self.values.iter().enumerate() {
            let v = self.vectors.column(j);
            out += v * v.adjoint() * *z;
        }
        out
    }

    /// `‖V†V − 1‖_F` for the eigenvector matrix `V`.
    pub fn gram_residual(&self) -> f64 {
        let n = self.vectors.ncols();
        (self.vectors.adjoint() * &self.vectors - CMatrix::identity(n, n)).norm()
    }
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues in ascending
/// order.
pub fn hermitian_eigendecomposition(h: &CMatrix, tol: &ToleranceConfig) -> Result<Spectrum> {
    let n = ensure_hermitian(h, tol)?;
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let (values, vectors) = if is_diagonal(&sym) {
        let values: Vec<f64> = sym.diagonal().iter().map(|z| z.re).collect();
        (values, CMatrix::identity(n, n))
    } else {
        let eig = SymmetricEigen::try_new(sym, f64::EPSILON, MAX_SWEEPS)
            .ok_or_else(|| Error::NumericalFailure("Hermitian eigensolver did not converge".into()))?;
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let columns: Vec<CVector> = order.iter().map(|&j| vectors.column(j).into_owned()).collect();
    let sorted: Vec<C64> = order.iter().map(|&j| c(values[j], 0.0)).collect();
    Ok(finish(sorted, columns, SpectrumOrdering::AscendingReal))
}

/// Eigendecomposition of a normal matrix via its complex Schur form, which
/// is diagonal for normal input. Unitary input is ordered by principal
/// argument in `[0, 2π)`; Hermitian (non-unitary) input by real part; any
/// other normal input by argument, ties broken by modulus.
pub fn normal_eigendecomposition(a: &CMatrix, tol: &ToleranceConfig) -> Result<Spectrum> {
    let n = ensure_normal(a, tol)?;
    let q = if is_diagonal(a) {
        CMatrix::identity(n, n)
    } else {
        let schur = Schur::try_new(a.clone(), f64::EPSILON, MAX_SWEEPS)
            .ok_or_else(|| Error::NumericalFailure("Schur iteration did not converge".into()))?;
        schur.unpack().0
    };
    let columns: Vec<CVector> = (0..n).map(|j| q.column(j).into_owned()).collect();
    let columns = orthonormalize(&columns, 1e-6);
    if columns.len() != n {
        return Err(Error::NumericalFailure("Schur vectors lost orthogonality".into()));
    }
    let values: Vec<C64> = columns.iter().map(|v| v.dotc(&(a * v))).collect();

    let ordering = if is_unitary(a, tol) {
        SpectrumOrdering::AscendingArgument
    } else if hermitian_residual(a) <= tol.eps_proj * a.norm() {
        SpectrumOrdering::AscendingReal
    } else {
        SpectrumOrdering::AscendingArgument
    };
    let mut order: Vec<usize> = (0..n).collect();
    match ordering {
        SpectrumOrdering::AscendingReal => {
            order.sort_by(|&i, &j| values[i].re.total_cmp(&values[j].re).then(i.cmp(&j)));
        }
        SpectrumOrdering::AscendingArgument => order.sort_by(|&i, &j| {
            principal_arg(values[i])
                .total_cmp(&principal_arg(values[j]))
                .then(values[i].norm().total_cmp(&values[j].norm()))
                .then(i.cmp(&j))
        }),
    }
    let sorted: Vec<C64> = order
        .iter()
        .map(|&j| match ordering {
            SpectrumOrdering::AscendingReal => c(values[j].re, 0.0),
            SpectrumOrdering::AscendingArgument => values[j],
        })
        .collect();
    let cols: Vec<CVector> = order.iter().map(|&j| columns[j].clone()).collect();
    Ok(finish(sorted, cols, ordering))
}

fn finish(values: Vec<C64>, columns: Vec<CVector>, ordering: SpectrumOrdering) -> Spectrum {
    let n = columns.first().map_or(0, |v| v.len());
    let mut columns = orthonormalize(&columns, 0.0);
    for v in &mut columns {
        fix_phase(v);
    }
    Spectrum { values, vectors: columns_to_matrix(n, &columns), ordering }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{pauli, random_unitary};
    use crate::matcore::{basis_vector, diag, diag_real, identity};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn ginibre(n: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(n, n, |_, _| {
            c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        })
    }

    fn check_invariants(a: &CMatrix, s: &Spectrum) {
        assert!(s.gram_residual() <= 1e-10, "gram {}", s.gram_residual());
        let recon = (s.reconstruct() - a).norm();
        assert!(recon <= 1e-10 * a.norm().max(1.0), "recon {recon}");
    }

    #[test]
    fn diagonal_hermitian_is_sorted_with_permuted_basis() {
        let h = diag_real(&[3.0, 1.0, 2.0]);
        let s = hermitian_eigendecomposition(&h, &tol()).unwrap();
        assert_eq!(s.real_values(), vec![1.0, 2.0, 3.0]);
        assert_eq!(s.vector(0), basis_vector(3, 1));
        assert_eq!(s.vector(1), basis_vector(3, 2));
        assert_eq!(s.vector(2), basis_vector(3, 0));
        assert_eq!(s.ordering(), SpectrumOrdering::AscendingReal);
    }

    #[test]
    fn pauli_z_eigenpairs() {
        let s = hermitian_eigendecomposition(&pauli::z(), &tol()).unwrap();
        assert_eq!(s.real_values(), vec![-1.0, 1.0]);
        assert_eq!(s.vector(0), basis_vector(2, 1));
        assert_eq!(s.vector(1), basis_vector(2, 0));
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let a = ginibre(8, 11);
        let h = &a + a.adjoint();
        let s = hermitian_eigendecomposition(&h, &tol()).unwrap();
        check_invariants(&h, &s);
        assert!(s.values().windows(2).all(|w| w[0].re <= w[1].re));
        assert!(s.values().iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let a = ginibre(4, 3);
        assert!(matches!(hermitian_eigendecomposition(&a, &tol()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn diagonal_unitary_in_argument_order() {
        let u = diag(&[c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)]);
        let s = normal_eigendecomposition(&u, &tol()).unwrap();
        assert_eq!(s.values(), &[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]);
        assert_eq!(s.vector(0), basis_vector(4, 3));
        assert_eq!(s.ordering(), SpectrumOrdering::AscendingArgument);
    }

    #[test]
    fn zz_as_normal_operator() {
        let s = normal_eigendecomposition(&pauli::zz(), &tol()).unwrap();
        let mut vals: Vec<f64> = s.values().iter().map(|z| z.re).collect();
        vals.sort_by(f64::total_cmp);
        assert_eq!(vals, vec![-1.0, -1.0, 1.0, 1.0]);
        check_invariants(&pauli::zz(), &s);
    }

    #[test]
    fn haar_unitary_spectrum_is_unimodular() {
        for seed in 0..20 {
            let u = random_unitary(4, seed);
            let s = normal_eigendecomposition(&u, &tol()).unwrap();
            check_invariants(&u, &s);
            assert!(s.values().iter().all(|z| (z.norm() - 1.0).abs() <= 1e-10));
            let args: Vec<f64> = s.values().iter().map(|z| principal_arg(*z)).collect();
            assert!(args.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn rotated_degenerate_unitary_reconstructs() {
        // near-degenerate and exactly degenerate spectra hidden behind a random basis
        for seed in 0..20 {
            let w = random_unitary(6, 100 + seed);
            let d = diag(&[
                c(1.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 1.0),
                C64::from_polar(1.0, 1e-9),
                c(-1.0, 0.0),
                c(-1.0, 0.0),
            ]);
            let u = &w * d * w.adjoint();
            let s = normal_eigendecomposition(&u, &tol()).unwrap();
            check_invariants(&u, &s);
        }
    }

    #[test]
    fn non_normal_is_rejected() {
        let mut a = identity(2);
        a[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(normal_eigendecomposition(&a, &tol()), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn general_normal_matrix() {
        let w = random_unitary(5, 9);
        let d = diag(&[c(2.0, 1.0), c(-0.5, 0.3), c(0.0, -3.0), c(1.0, 0.0), c(0.2, 0.2)]);
        let a = &w * d * w.adjoint();
        let s = normal_eigendecomposition(&a, &tol()).unwrap();
        check_invariants(&a, &s);
    }
}
