//! Exact analysis of the three-qubit Lipkin-Meshkov-Glick ground state.
//!
//! The Hamiltonian
//!
//! ```text
//! H(γ, h) = −(1/6) Σ_{i<j} (σx^i σx^j + γ σy^i σy^j) + (h/2) Σ_k σz^k
//! ```
//!
//! splits into two 4×4 parity blocks `P(γ, h)` and `P(γ, −h)` in the basis
//! `{|000⟩, |011⟩, |101⟩, |110⟩, |111⟩, |100⟩, |010⟩, |001⟩}`. Every quantity in
//! this crate has a closed form in terms of the block energies `𝓔₀ ± Δ𝓔` and the
//! mixing angle `Θ`, and every closed form is paired with an independent
//! brute-force route in [`oracle`]:
//!
//! - [`model`]: Hamiltonian, spectrum, mixing angle, crossing line, ground state.
//! - [`reduced`]: one- and two-qubit marginals, closed form and partial trace.
//! - [`phase`]: pure Berry phase, effective two-level field, monopole, and the
//!   interferometric mixed-state phase of the two-qubit marginal.
//! - [`fidelity`]: ground-state and partial-state fidelity susceptibilities.
//! - [`oracle`]: dense Hermitian eigensolver, PSD square root, finite
//!   differences, and the per-point verification report.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod phase;
pub mod reduced;

mod math;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use model::{Branch, GroundBranch, GroundState, ModelParams, State};
