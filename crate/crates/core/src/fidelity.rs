//! Fidelity susceptibilities with respect to the field `h`.
//!
//! The driving term is `∂H/∂h = S_z`. Only the upper bright level of the
//! occupied block couples to the ground vector, at distance `2Δ𝓔`, so
//!
//! ```text
//! χ = |⟨V₊|S_z|V₋⟩|²/(2Δ𝓔)² = sin²Θ/(4Δ𝓔²) = Θ'²/4
//! ```
//!
//! with `Θ' = ∂Θ/∂h = −√3(γ−1)/(6Δ𝓔²)` (sign flipped in the odd block). The
//! often quoted `sin²Θ/Δ𝓔²` drops the factor 4 of the squared gap and
//! overestimates the finite-difference value by exactly 4.
//!
//! All susceptibilities use `χ = lim 2(1 − F)/δh²` with the Bures fidelity
//! `F = Tr√(√ρ σ √ρ)` (for pure states `|⟨ψ|φ⟩|`). For the marginals this gives
//!
//! ```text
//! χ₁ = r'²/(4(1 − r²)) = (1 + cos Θ)Θ'²/(4(2 + cos Θ))
//! χ₂ = χ₁ + Θ'²/(4(2 + cos Θ)) = Θ'²/4
//! ```
//!
//! so the two-qubit marginal is as sensitive as the full state. The forms
//! `½(1 − r²)⁻¹r'²` and `χ₁ + (2 + cos Θ)⁻¹Θ'²` seen elsewhere differ from
//! these by constant factors; the finite-difference oracle in
//! [`crate::oracle`] fixes the constants used here.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{inner, CMatrix, C64};
use crate::math::{cos, sin, sqrt};
use crate::model::{
    build_hamiltonian, eigensystem_closed_form, energy_functions, ground_state, mixing_angle,
    spin, Branch, Level, ModelParams, Spectrum,
};
use crate::oracle::{hermitian_eigensystem, occupied_block, psd_sqrt};
use crate::reduced::{purity_parameter, DensityOperator};

/// Distance from the isotropic line below which `∂Θ/∂h` is not evaluated.
pub const ISOTROPIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SusceptibilityKind {
    Full,
    OneQubit,
    TwoQubit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    PerturbativeSum,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SusceptibilityResult {
    pub value: f64,
    pub kind: SusceptibilityKind,
    pub method: Method,
}

impl SusceptibilityResult {
    fn new(value: f64, kind: SusceptibilityKind, method: Method) -> Self {
        // Rounding can leave tiny negatives.
        let value = if value < 0.0 && value > -1e-12 { 0.0 } else { value };
        Self { value, kind, method }
    }
}

/// `H(γ, h) = h0 + h·h_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivingSplit {
    /// `−(S_x² + γS_y²)/3 + (1 + γ)/4`
    pub h0: CMatrix,
    /// `S_z`
    pub h_i: CMatrix,
}

pub fn driving_split(gamma: f64) -> DrivingSplit {
    let p = ModelParams { gamma, h: 0.0, tol_degeneracy: crate::model::DEFAULT_TOL_DEGENERACY };
    DrivingSplit { h0: build_hamiltonian(&p), h_i: spin::spin(spin::Axis::Z) }
}

/// Spectral gap above the ground level (zero on the crossing and at `h = 0`).
pub fn excitation_gap(params: &ModelParams) -> f64 {
    let e = Spectrum::new(params).eigenvalues();
    e[1] - e[0]
}

fn active_branch(params: &ModelParams) -> Result<Branch> {
    ground_state(params)
        .active_branch()
        .ok_or(Error::AtCrossing { gamma: params.gamma, h: params.h })
}

fn coupled_gap(params: &ModelParams, block: Branch) -> Result<f64> {
    let gap = 2.0 * energy_functions(params, block).de;
    if gap <= params.tol_degeneracy {
        return Err(Error::NearDegeneracy { gap });
    }
    Ok(gap)
}

/// `Σ_{n≠g} |⟨V_n|S_z|V_g⟩|²/(E_n − E_g)²` over the closed-form eigenpairs.
pub fn fidelity_susceptibility_sum(params: &ModelParams) -> Result<SusceptibilityResult> {
    fidelity_susceptibility_sum_branch(params, active_branch(params)?)
}

pub fn fidelity_susceptibility_sum_branch(params: &ModelParams, branch: Branch) -> Result<SusceptibilityResult> {
    let block = occupied_block(params, branch);
    coupled_gap(params, block)?;
    let pairs = eigensystem_closed_form(params);
    let g = pairs
        .iter()
        .find(|p| p.branch == block && p.level == Level::Lower)
        .expect("lower level of every block");
    let sz = spin::spin(spin::Axis::Z);
    let sz_g = sz.mul_vec(&g.vector);
    let mut chi = 0.0;
    for n in pairs.iter().filter(|p| !(p.branch == block && p.level == Level::Lower)) {
        let num = inner(&n.vector, &sz_g).norm_sqr();
        // Uncoupled levels can be degenerate with the ground level (h = 0).
        if num <= 1e-30 {
            continue;
        }
        let de = n.energy - g.energy;
        if de.abs() <= params.tol_degeneracy {
            return Err(Error::NearDegeneracy { gap: de.abs() });
        }
        chi += num / (de * de);
    }
    Ok(SusceptibilityResult::new(chi, SusceptibilityKind::Full, Method::PerturbativeSum))
}

/// `sin²Θ/(4Δ𝓔²)` on the occupied block.
pub fn fidelity_susceptibility_closed(params: &ModelParams) -> Result<SusceptibilityResult> {
    fidelity_susceptibility_closed_branch(params, active_branch(params)?)
}

pub fn fidelity_susceptibility_closed_branch(params: &ModelParams, branch: Branch) -> Result<SusceptibilityResult> {
    let block = occupied_block(params, branch);
    let gap = coupled_gap(params, block)?;
    let s = sin(mixing_angle(params, block));
    Ok(SusceptibilityResult::new(s * s / (gap * gap), SusceptibilityKind::Full, Method::ClosedForm))
}

/// `∂/∂h Θ(γ, ±h)` for the even (`+`) or odd (`−`) block.
pub fn theta_derivative(params: &ModelParams, block: Branch) -> Result<f64> {
    if (params.gamma - 1.0).abs() <= ISOTROPIC_TOL {
        return Err(Error::DerivativeUndefined { gamma: params.gamma });
    }
    let de = energy_functions(params, block).de;
    if de <= params.tol_degeneracy {
        return Err(Error::Singularity { gamma: params.gamma, field: params.field(block), delta_e: de });
    }
    Ok(-block.sign() * sqrt(3.0) * (params.gamma - 1.0) / (6.0 * de * de))
}

/// Occupied block, `Θ` and `Θ'` of a branch; `None` on the isotropic line.
fn marginal_inputs(params: &ModelParams, branch: Branch) -> Result<Option<(f64, f64)>> {
    let block = occupied_block(params, branch);
    let theta = mixing_angle(params, block);
    match theta_derivative(params, block) {
        Ok(d) => Ok(Some((theta, d))),
        Err(Error::DerivativeUndefined { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// One-qubit marginal susceptibility of a branch; the isotropic line gives its limit 0.
pub fn partial_fs_one_qubit_branch(params: &ModelParams, branch: Branch) -> Result<SusceptibilityResult> {
    let value = match marginal_inputs(params, branch)? {
        None => 0.0,
        Some((theta, d)) => {
            let c = cos(theta);
            (1.0 + c) * d * d / (4.0 * (2.0 + c))
        }
    };
    Ok(SusceptibilityResult::new(value, SusceptibilityKind::OneQubit, Method::ClosedForm))
}

pub fn partial_fs_one_qubit(params: &ModelParams) -> Result<SusceptibilityResult> {
    partial_fs_one_qubit_branch(params, active_branch(params)?)
}

/// The same quantity through `r'²/(4(1 − r²))`; loses accuracy as `|r| → 1`.
pub fn partial_fs_one_qubit_r_form(params: &ModelParams) -> Result<f64> {
    let branch = active_branch(params)?;
    let Some((theta, d)) = marginal_inputs(params, branch)? else {
        return Ok(0.0);
    };
    let r = purity_parameter(theta);
    let dr = -(2.0 / 3.0) * sin(theta) * d;
    let purity_gap = 1.0 - r * r;
    if purity_gap <= 1e-12 {
        return Err(Error::InvalidState { reason: "marginal is pure", value: r });
    }
    Ok(dr * dr / (4.0 * purity_gap))
}

/// Two-qubit marginal susceptibility of a branch.
pub fn partial_fs_two_qubit_branch(params: &ModelParams, branch: Branch) -> Result<SusceptibilityResult> {
    let chi1 = partial_fs_one_qubit_branch(params, branch)?.value;
    let value = match marginal_inputs(params, branch)? {
        None => 0.0,
        Some((theta, d)) => chi1 + d * d / (4.0 * (2.0 + cos(theta))),
    };
    Ok(SusceptibilityResult::new(value, SusceptibilityKind::TwoQubit, Method::ClosedForm))
}

pub fn partial_fs_two_qubit(params: &ModelParams) -> Result<SusceptibilityResult> {
    partial_fs_two_qubit_branch(params, active_branch(params)?)
}

/// Two-qubit susceptibility from the spectral decomposition of `ϱ`:
/// `¼ Σ p_k'²/p_k + p₁(⟨ψ₁'|ψ₁'⟩ − |⟨ψ₁|ψ₁'⟩|²)` with `ψ₂` fixed.
pub fn partial_fs_two_qubit_eigen_form(params: &ModelParams) -> Result<f64> {
    let branch = active_branch(params)?;
    let Some((theta, d)) = marginal_inputs(params, branch)? else {
        return Ok(0.0);
    };
    let r = purity_parameter(theta);
    let dr = -(2.0 / 3.0) * sin(theta) * d;
    let (p1, p2) = (0.5 * (1.0 + r), 0.5 * (1.0 - r));
    let dp2 = 0.25 * dr * dr;
    let classical = 0.25 * (dp2 / p1 + dp2 / p2);

    // ψ₁(Θ) = (√3 cos(Θ/2), sin(Θ/2))/√(2 + cos Θ) on {|00⟩, |11⟩}; the block
    // only swaps the two entries, which leaves the metric unchanged.
    let n = sqrt(2.0 + cos(theta));
    let dn = -sin(theta) / (2.0 * n);
    let num = [sqrt(3.0) * cos(0.5 * theta), sin(0.5 * theta)];
    let dnum = [-0.5 * sqrt(3.0) * sin(0.5 * theta), 0.5 * cos(0.5 * theta)];
    let psi = [num[0] / n, num[1] / n];
    let dpsi = [(dnum[0] * n - num[0] * dn) / (n * n), (dnum[1] * n - num[1] * dn) / (n * n)];
    let norm2 = dpsi[0] * dpsi[0] + dpsi[1] * dpsi[1];
    let along = psi[0] * dpsi[0] + psi[1] * dpsi[1];
    let quantum = p1 * (norm2 - along * along) * d * d;
    Ok(classical + quantum)
}

/// Bures fidelity `Tr√(√a b √a) = ‖√a√b‖₁`.
///
/// Evaluated as `Re Tr(√a√b U)` with the polar unitary `U`. The eigenvalues
/// of `√a b √a` are squares of the singular values, so taking their roots
/// would lose about `ε/σ_min` for nearly singular states.
pub fn bures_fidelity(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    let (x, y, u) = polar_pair(a, b)?;
    Ok((&(&x * &y) * &u).trace().re.clamp(0.0, 1.0))
}

fn hermitize(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(m.dim(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()))
}

/// `1 − F(a, b)` without cancellation: `½ min_U ‖√a − √b U‖²_F`.
pub fn bures_infidelity(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    let (x, y, u) = polar_pair(a, b)?;
    let diff = &x - &(&y * &u);
    Ok((0.5 * diff.frobenius_norm_sqr()).clamp(0.0, 1.0))
}

/// `(√a, √b, U)` with `U` the unitary maximizing `Re Tr(√a√b U)`.
fn polar_pair(a: &DensityOperator, b: &DensityOperator) -> Result<(CMatrix, CMatrix, CMatrix)> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    let n = a.dim();
    let x = psd_sqrt(a.matrix())?;
    let y = psd_sqrt(b.matrix())?;
    // Re Tr(K U) is maximal for U = B A† where K = X Y = A S B†.
    let k = &x * &y;
    let right = hermitian_eigensystem(&hermitize(&(&k.adjoint() * &k)))?;
    let mut left: Vec<Vec<C64>> = Vec::new();
    let mut right_cols = Vec::new();
    let mut null_right = Vec::new();
    // `K b / s` drifts from orthogonal for small `s`, and a non-unitary `U`
    // is off at first order, so each one is re-orthogonalized. Largest
    // singular values come first.
    for j in (0..n).rev() {
        let s2 = right.values[j];
        let bj = right.vector(j);
        if s2 > 1e-24 {
            let s = sqrt(s2);
            let mut aj: Vec<C64> = k.mul_vec(&bj).iter().map(|z| z / s).collect();
            if orthogonalize(&left, &mut aj) > 0.5 {
                left.push(aj);
                right_cols.push(bj);
                continue;
            }
        }
        null_right.push(bj);
    }
    // Complete with the unit vector that keeps most of its norm; some
    // unit vector always keeps at least 1/√n.
    while left.len() < n {
        let best = (0..n)
            .map(|e| {
                let mut w = alloc::vec![C64::new(0.0, 0.0); n];
                w[e] = C64::new(1.0, 0.0);
                let r = orthogonalize(&left, &mut w);
                (r, w)
            })
            .max_by(|p, q| p.0.total_cmp(&q.0))
            .map(|(_, w)| w);
        left.extend(best);
    }
    right_cols.extend(null_right);
    for c in 0..n {
        let (done, rest) = right_cols.split_at_mut(c);
        orthogonalize(done, &mut rest[0]);
    }
    let u = CMatrix::from_fn(n, |i, j| (0..n).map(|c| right_cols[c][i] * left[c][j].conj()).sum());
    Ok((x, y, u))
}

/// Removes the components along the orthonormal `done` (two passes) and
/// normalizes `w`. Returns the norm that was left before normalizing.
fn orthogonalize(done: &[Vec<C64>], w: &mut [C64]) -> f64 {
    for _ in 0..2 {
        for u in done {
            let c = inner(u, w);
            w.iter_mut().zip(u).for_each(|(wi, ui)| *wi -= ui * c);
        }
    }
    let nw = crate::linalg::norm(w);
    if nw > 0.0 {
        w.iter_mut().for_each(|z| *z /= nw);
    }
    nw
}

/// `1 − |⟨a|b⟩|` for unit vectors, as `½‖a − b·u‖²` with the optimal phase `u`.
pub fn pure_infidelity(a: &[C64], b: &[C64]) -> f64 {
    let ov = inner(a, b);
    let u = if ov.norm() > 0.0 { ov.conj() / ov.norm() } else { C64::new(1.0, 0.0) };
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y * u).norm_sqr()).sum();
    (0.5 * d).clamp(0.0, 1.0)
}
