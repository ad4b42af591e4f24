//! Exact Pauli-Z operators on qubit registers. Qubit 0 is the leftmost
//! tensor factor, so `|01⟩` is basis index 1.

use crate::matcore::{c, diag_real, identity, kron, CMatrix};

pub fn z() -> CMatrix {
    diag_real(&[1.0, -1.0])
}

pub fn x() -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = c(1.0, 0.0);
    m[(1, 0)] = c(1.0, 0.0);
    m
}

pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    kron(a, b)
}

/// `Z ⊗ 1_{2^{n−1}}` on `n ≥ 1` qubits.
pub fn z1(n: usize) -> CMatrix {
    assert!(n >= 1, "Z1 needs at least one qubit");
    z_on(n, 0)
}

/// `Z ⊗ Z` on two qubits.
pub fn zz() -> CMatrix {
    tensor(&z(), &z())
}

/// Pauli Z acting on `qubit` of an `n`-qubit register.
pub fn z_on(n: usize, qubit: usize) -> CMatrix {
    assert!(qubit < n, "qubit index out of range");
    let dim = 1usize << n;
    let signs: Vec<f64> = (0..dim)
        .map(|idx| if (idx >> (n - 1 - qubit)) & 1 == 1 { -1.0 } else { 1.0 })
        .collect();
    diag_real(&signs)
}

/// Tensor product of the listed operators, left to right.
pub fn tensor_all(ops: &[CMatrix]) -> CMatrix {
    ops.iter().fold(identity(1), |acc, op| kron(&acc, op))
}
