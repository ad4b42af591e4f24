//! Higher-rank numerical ranges and the quantum codes they produce.
//!
//! The crate is organised bottom-up:
//!
//! * [`matcore`] dense complex matrices, eigendecompositions, projections and
//!   the scalar-compression test `PAP = λP`.
//! * [`numrange`] rank-k numerical ranges `Λ_k` of Hermitian, normal and
//!   unitary operators, plus constructors for the projections that realise
//!   each compression-value.
//! * [`channel`] Kraus channels, bi-unitary channels, Pauli builders and Haar
//!   sampling.
//! * [`qec`] Knill-Laflamme verification, the Λ matrix, and recovery channel
//!   synthesis.
//! * [`codesearch`] code families for bi-unitary two-qubit channels, the
//!   Pauli-model families and multi-unitary search.

pub mod channel;
pub mod codesearch;
mod error;
pub mod matcore;
pub mod numrange;
pub mod qec;

pub use error::{Error, Result};
pub use matcore::{CMatrix, CVector, ToleranceConfig, C64};
