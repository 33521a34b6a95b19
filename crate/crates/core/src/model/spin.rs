//! Pauli strings and collective spin operators in the block-ordered basis.
//!
//! Qubit 1 is the leftmost label in `|q1 q2 q3⟩`. Pauli conventions:
//! `σz|0⟩ = |0⟩`, `σy|0⟩ = i|1⟩`, `σy|1⟩ = −i|0⟩`.

use super::BASIS;
use crate::linalg::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Position of a computational bit string (q1 = most significant) in [`BASIS`].
pub fn basis_index(bits: u8) -> usize {
    BASIS.iter().position(|&b| b == bits).expect("three-qubit bit string")
}

#[inline]
fn bit_mask(qubit: usize) -> u8 {
    assert!((1..=3).contains(&qubit), "qubit label must be 1, 2 or 3");
    1 << (3 - qubit)
}

fn pauli_action(axis: Axis, qubit: usize, bits: u8) -> (u8, C64) {
    let mask = bit_mask(qubit);
    let set = bits & mask != 0;
    match axis {
        Axis::X => (bits ^ mask, C64::new(1.0, 0.0)),
        Axis::Y => (bits ^ mask, if set { C64::new(0.0, -1.0) } else { C64::new(0.0, 1.0) }),
        Axis::Z => (bits, C64::new(if set { -1.0 } else { 1.0 }, 0.0)),
    }
}

/// Matrix of a Pauli string, given as `(axis, qubit)` factors.
pub fn pauli_string(factors: &[(Axis, usize)]) -> CMatrix {
    let mut m = CMatrix::zeros(8);
    for (col, &bits) in BASIS.iter().enumerate() {
        let mut out = bits;
        let mut amp = C64::new(1.0, 0.0);
        for &(axis, qubit) in factors {
            let (b, a) = pauli_action(axis, qubit, out);
            out = b;
            amp *= a;
        }
        m[(basis_index(out), col)] += amp;
    }
    m
}

/// Collective spin component `S_α = ½ Σ_k σ_α^k`.
pub fn spin(axis: Axis) -> CMatrix {
    let mut s = CMatrix::zeros(8);
    for q in 1..=3 {
        s = &s + &pauli_string(&[(axis, q)]);
    }
    s.scale(C64::new(0.5, 0.0))
}

pub fn total_spin_squared() -> CMatrix {
    let x = spin(Axis::X);
    let y = spin(Axis::Y);
    let z = spin(Axis::Z);
    &(&(&x * &x) + &(&y * &y)) + &(&z * &z)
}

/// Spin parity `σz ⊗ σz ⊗ σz`; its eigenspaces are the two 4×4 blocks.
pub fn parity() -> CMatrix {
    pauli_string(&[(Axis::Z, 1), (Axis::Z, 2), (Axis::Z, 3)])
}

/// Global bit flip `σx ⊗ σx ⊗ σx`, which maps `H(γ, h)` to `H(γ, −h)`.
pub fn flip() -> CMatrix {
    pauli_string(&[(Axis::X, 1), (Axis::X, 2), (Axis::X, 3)])
}

/// Eigenvalues of `S_z` on each basis vector (the rotation generator is diagonal).
pub fn spin_z_diagonal() -> [f64; 8] {
    let mut d = [0.0; 8];
    for (i, &bits) in BASIS.iter().enumerate() {
        let ones = bits.count_ones() as f64;
        d[i] = 0.5 * ((3.0 - ones) - ones);
    }
    d
}

/// The Hamiltonian assembled from Pauli strings:
/// `−(1/6) Σ_{i<j} (σx σx + γ σy σy) + (h/2) Σ σz`.
///
/// Independent of the block-literal construction in
/// [`build_hamiltonian`](super::build_hamiltonian); both must agree.
pub fn pauli_hamiltonian(gamma: f64, h: f64) -> CMatrix {
    let pairs = [(1, 2), (2, 3), (1, 3)];
    let mut m = CMatrix::zeros(8);
    for &(i, j) in &pairs {
        let xx = pauli_string(&[(Axis::X, i), (Axis::X, j)]);
        let yy = pauli_string(&[(Axis::Y, i), (Axis::Y, j)]);
        m = &m + &(&xx + &yy.scale(C64::new(gamma, 0.0)));
    }
    m = m.scale(C64::new(-1.0 / 6.0, 0.0));
    let field = spin(Axis::Z).scale(C64::new(h, 0.0));
    &m + &field
}
