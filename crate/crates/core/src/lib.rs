//! Small-register quantum state simulation with entanglement measures for
//! tagged (purified) mixed states.
//!
//! A mixed two-party state `ρ_AB` is always handled here through a pure state
//! `|Ψ_ABT⟩` of a larger register whose extra qubits (the *taggant* `T`) purify
//! it. Measuring the taggant in a chosen basis splits `AB` into an ensemble of
//! pure states; the weighted average of their entanglement is the
//! entanglement of projection `E_p`. Minimising and maximising `E_p` over
//! taggant bases gives the entanglement of formation and of assistance, and
//! weighting the formation of post-measurement states gives `E_pf`.
//!
//! The crate is `no_std` (it needs `alloc`). File formats and the command-line
//! front end live in the `eraserlab` crate.
//!
//! Qubit ordering is big-endian throughout: qubit 0 is the most significant
//! bit of a basis-state index.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod circuits;
pub mod dsl;
mod error;
pub mod linalg;
pub(crate) mod math;
pub mod measures;
pub mod optimize;
pub mod random;
pub mod scenarios;
pub mod state;

pub use circuits::{
    apply_gate, measure, taggant_basis, tagger, untagger, Gate, GateKind, MeasurementResult,
    MeasurementSpec, Outcome, TaggantBasis,
};
pub use error::{Error, Result};
pub use linalg::{hermitian_eigen, CMatrix};
pub use measures::{
    binary_entropy, concurrence_ef_oracle, entanglement_of_assistance,
    entanglement_of_formation, entanglement_of_projection, entanglement_pf, entanglement_pure,
    ep_closed_form, ep_sum_form, BasisParams, EntanglementReport,
};
pub use num_complex::Complex64;
pub use scenarios::{ScenarioTrace, Step};
pub use state::{
    density_matrix, eigensolve_hermitian, partial_trace, schmidt_decompose, tensor,
    DecompositionView, DensityMatrix, PartitionSpec, SchmidtDecomposition, StateVector,
    MAX_QUBITS,
};
