//! One- and two-qubit marginals of the ground state.
//!
//! With `r = (1 + 2cos Θ)/3` the closed forms are
//!
//! ```text
//! ρ = ½(1 + z σz),            z = ±r
//! ϱ = p₁|ψ₁⟩⟨ψ₁| + p₂|ψ₂⟩⟨ψ₂|,  p₁,₂ = (1 ± r)/2
//! ψ₁ = (√3 cos(Θ/2)|00⟩ + sin(Θ/2)|11⟩)/√(2 + cos Θ),  ψ₂ = (|01⟩ + |10⟩)/√2
//! ```
//!
//! for a vector in the even block. In the odd block `|0⟩ ↔ |1⟩` on every
//! qubit, so `z = −r` and the roles of `|00⟩` and `|11⟩` in `ψ₁` swap. The
//! compact `½(1 + r(γ,−h)σz)` would map `|111⟩` to `|0⟩⟨0|`; the sign used
//! here is the one the partial trace produces.
//!
//! 8-dimensional operators use the block basis order of
//! [`BASIS`](crate::model::BASIS); 2- and 4-dimensional ones use the standard
//! order `|0⟩, |1⟩` and `|00⟩, |01⟩, |10⟩, |11⟩`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ZERO};
use crate::math::{cos, sin, sqrt};
use crate::model::{branch_state, ground_state, Branch, BranchState, ModelParams, BASIS};
use crate::oracle::hermitian_eigensystem;

const HERMITIAN_TOL: f64 = 1e-13;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-12;

/// Validated density matrix on one, two or three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = matrix.dim();
        if !matches!(n, 2 | 4 | 8) {
            return Err(Error::InvalidArgument("density operators act on 1, 2 or 3 qubits"));
        }
        // NaN slips past every comparison below.
        if !(0..n).all(|i| (0..n).all(|j| matrix[(i, j)].is_finite())) {
            return Err(Error::InvalidArgument("density operator has non-finite entries"));
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let tr = matrix.trace();
        let dt = (tr - C64::new(1.0, 0.0)).norm();
        if dt > TRACE_TOL {
            return Err(Error::InvalidState { reason: "trace differs from 1", value: tr.re });
        }
        let min = hermitian_eigensystem(&matrix)?.values[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidState { reason: "negative eigenvalue", value: min });
        }
        Ok(Self { matrix })
    }

    /// `|v⟩⟨v|` for a normalized vector.
    pub fn pure(v: &[C64]) -> Result<Self> {
        Self::new(CMatrix::outer(v))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }
}

/// Bit string (qubit 1 most significant) stored at index `i`.
fn bits_at(dim: usize, i: usize) -> usize {
    if dim == 8 {
        BASIS[i] as usize
    } else {
        i
    }
}

fn validate_keep(qubits: usize, keep: &[usize]) -> Result<Vec<usize>> {
    let mut k: Vec<usize> = keep.to_vec();
    k.sort_unstable();
    k.dedup();
    if k.len() != keep.len() {
        return Err(Error::InvalidArgument("repeated qubit label in keep set"));
    }
    if k.is_empty() || k.len() >= qubits {
        return Err(Error::InvalidArgument("keep set must be a nonempty proper subset"));
    }
    if k.iter().any(|&q| q == 0 || q > qubits) {
        return Err(Error::InvalidArgument("qubit labels run from 1"));
    }
    Ok(k)
}

/// Reduced state on the qubits in `keep` (1-based labels), traced from a
/// pure 8-vector.
pub fn partial_trace(state: &[C64], keep: &[usize]) -> Result<DensityOperator> {
    if state.len() != 8 {
        return Err(Error::DimensionMismatch { left: state.len(), right: 8 });
    }
    partial_trace_matrix(&CMatrix::outer(state), keep)
}

/// Reduced state of a density operator on the qubits in `keep`.
pub fn partial_trace_density(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    partial_trace_matrix(rho.matrix(), keep)
}

fn partial_trace_matrix(m: &CMatrix, keep: &[usize]) -> Result<DensityOperator> {
    let dim = m.dim();
    let qubits = dim.trailing_zeros() as usize;
    if !dim.is_power_of_two() || !(2..=3).contains(&qubits) {
        return Err(Error::InvalidArgument("partial trace needs two or three qubits"));
    }
    let keep = validate_keep(qubits, keep)?;
    let traced: Vec<usize> = (1..=qubits).filter(|q| !keep.contains(q)).collect();
    let bit = |bits: usize, q: usize| (bits >> (qubits - q)) & 1;
    // Split a bit string into (kept index, traced index).
    let split = |bits: usize| {
        let k = keep.iter().fold(0, |acc, &q| (acc << 1) | bit(bits, q));
        let t = traced.iter().fold(0, |acc, &q| (acc << 1) | bit(bits, q));
        (k, t)
    };
    let out_dim = 1 << keep.len();
    let mut out = CMatrix::zeros(out_dim);
    for i in 0..dim {
        let (ki, ti) = split(bits_at(dim, i));
        for j in 0..dim {
            let (kj, tj) = split(bits_at(dim, j));
            if ti == tj {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    DensityOperator::new(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedOneQubit {
    /// Purity parameter `(1 + 2cos Θ)/3`.
    pub r: f64,
    /// `⟨σz⟩` of the marginal: `r` in the even block, `−r` in the odd block.
    pub bloch_z: f64,
    pub rho: DensityOperator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedTwoQubit {
    pub r: f64,
    pub p1: f64,
    pub p2: f64,
    pub psi1: [C64; 4],
    pub psi2: [C64; 4],
    pub varrho: DensityOperator,
}

pub fn purity_parameter(theta: f64) -> f64 {
    (1.0 + 2.0 * cos(theta)) / 3.0
}

fn even_block(s: &BranchState) -> bool {
    (s.branch == Branch::LowField) != s.mirrored
}

pub fn one_qubit_from_branch(s: &BranchState) -> ReducedOneQubit {
    let r = purity_parameter(s.theta);
    let z = if even_block(s) { r } else { -r };
    let rho = CMatrix::diagonal(&[0.5 * (1.0 + z), 0.5 * (1.0 - z)]);
    ReducedOneQubit { r, bloch_z: z, rho: DensityOperator { matrix: rho } }
}

pub fn two_qubit_from_branch(s: &BranchState) -> ReducedTwoQubit {
    let r = purity_parameter(s.theta);
    let norm = sqrt(2.0 + cos(s.theta));
    let top = sqrt(3.0) * cos(0.5 * s.theta) / norm;
    let dicke = sin(0.5 * s.theta) / norm;
    let (a00, a11) = if even_block(s) { (top, dicke) } else { (dicke, top) };
    let psi1 = [C64::new(a00, 0.0), ZERO, ZERO, C64::new(a11, 0.0)];
    let x = core::f64::consts::FRAC_1_SQRT_2;
    let psi2 = [ZERO, C64::new(x, 0.0), C64::new(x, 0.0), ZERO];
    let p1 = 0.5 * (1.0 + r);
    let p2 = 0.5 * (1.0 - r);
    let m = &CMatrix::outer(&psi1).scale(C64::new(p1, 0.0)) + &CMatrix::outer(&psi2).scale(C64::new(p2, 0.0));
    ReducedTwoQubit { r, p1, p2, psi1, psi2, varrho: DensityOperator { matrix: m } }
}

fn active_state(params: &ModelParams) -> Result<BranchState> {
    ground_state(params).active(params).copied()
}

/// Single-qubit marginal of the ground state (closed form).
pub fn one_qubit_reduced(params: &ModelParams) -> Result<ReducedOneQubit> {
    Ok(one_qubit_from_branch(&active_state(params)?))
}

/// Two-qubit marginal of the ground state (closed form).
pub fn two_qubit_reduced(params: &ModelParams) -> Result<ReducedTwoQubit> {
    Ok(two_qubit_from_branch(&active_state(params)?))
}

pub fn one_qubit_reduced_branch(params: &ModelParams, branch: Branch) -> ReducedOneQubit {
    one_qubit_from_branch(&branch_state(params, branch))
}

pub fn two_qubit_reduced_branch(params: &ModelParams, branch: Branch) -> ReducedTwoQubit {
    two_qubit_from_branch(&branch_state(params, branch))
}
