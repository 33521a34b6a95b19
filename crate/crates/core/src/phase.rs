//! Berry phases under the rotation `V(φ) = e^{−iφS_z} V`, `φ ∈ [0, 2π]`.
//!
//! Inside each parity block the rotated Hamiltonian projects onto the
//! two-level system `{top, Dicke}` as `𝓔₀·1 − B·σ` with
//!
//! ```text
//! B = Δ𝓔 (sin Θ cos 2φ, ±sin Θ sin 2φ, cos Θ)
//! ```
//!
//! (`+` for the even block, `−` for the odd one). The ground vector is aligned
//! with `B`, whose azimuth winds twice, so the phase is
//! `∓2π(1 − cos Θ)`: minus one half of the doubled solid angle. The
//! sign in front of `B·σ` follows from the matrix elements; with `+B·σ` the
//! ground vector would be anti-aligned and the phase sign would flip.
//!
//! The two-qubit marginal `ϱ = p₁|ψ₁⟩⟨ψ₁| + p₂|ψ₂⟩⟨ψ₂|` carries the
//! interferometric phase `Γ = arg(p₁e^{iβ₁} + p₂e^{iβ₂})`, where
//! `β₁ = ∓2π(1 − cos Θ)/(2 + cos Θ)` and `β₂ = 0` because `ψ₂` is an
//! eigenvector of the generator.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::math::{cos, sin, wrap_pi, TAU};
use crate::model::{
    energy_functions, ground_state, mixing_angle, spin, Branch, GroundBranch, ModelParams,
};
use crate::oracle::{
    block_ground_vector, discrete_berry_phase, hermitian_eigensystem, occupied_block,
};
use crate::reduced::partial_trace;

/// `β₂`: `ψ₂ = (|01⟩ + |10⟩)/√2` has zero weight of the generator.
pub const BETA_TWO: f64 = 0.0;

/// Marginals with `|r|` at or below this have (numerically) degenerate weights.
pub const MARGINAL_DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult {
    /// Accumulated phase, not reduced.
    pub raw: f64,
    /// `raw` reduced into `(−π, π]`.
    pub principal: f64,
    pub branch: Branch,
}

impl PhaseResult {
    fn new(raw: f64, branch: Branch) -> Self {
        Self { raw, principal: wrap_pi(raw), branch }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveField {
    pub magnitude: f64,
    pub direction: [f64; 3],
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedPhaseResult {
    pub gamma_phase: f64,
    pub weights: (f64, f64),
    pub eigenphases: (f64, f64),
    /// `|p₁e^{iβ₁} + p₂e^{iβ₂}|`, the interference visibility.
    pub visibility: f64,
}

fn active_branch(params: &ModelParams) -> Result<Branch> {
    ground_state(params)
        .active_branch()
        .ok_or(Error::AtCrossing { gamma: params.gamma, h: params.h })
}

/// Sign of the phase for vectors in a parity block: `−1` even, `+1` odd.
fn block_sign(block: Branch) -> f64 {
    -block.sign()
}

/// Berry phase of one branch. For `h < 0` the branch vector sits in the
/// other block and the phase changes sign.
pub fn berry_phase_branch(params: &ModelParams, branch: Branch) -> PhaseResult {
    let block = occupied_block(params, branch);
    let theta = mixing_angle(params, block);
    PhaseResult::new(block_sign(block) * TAU * (1.0 - cos(theta)), branch)
}

/// Berry phase of the ground state; undefined at the crossing.
pub fn berry_phase_pure(params: &ModelParams) -> Result<PhaseResult> {
    Ok(berry_phase_branch(params, active_branch(params)?))
}

/// Discrete Pancharatnam phase of the dense-solver ground vector, principal value.
pub fn berry_phase_discrete_oracle(params: &ModelParams, steps: usize) -> Result<f64> {
    berry_phase_discrete_branch(params, active_branch(params)?, steps)
}

pub fn berry_phase_discrete_branch(params: &ModelParams, branch: Branch, steps: usize) -> Result<f64> {
    let v = block_ground_vector(params, branch)?;
    discrete_berry_phase(&v, &spin::spin_z_diagonal(), steps)
}

/// `β₁ = ∓2π(1 − cos Θ)/(2 + cos Θ)`, upper sign for the even block.
pub fn eigenstate_berry_phase(theta: f64, branch: Branch) -> f64 {
    let c = cos(theta);
    block_sign(branch) * TAU * (1.0 - c) / (2.0 + c)
}

/// Interferometric phase of the two-qubit marginal of one branch.
pub fn mixed_berry_phase_branch(params: &ModelParams, branch: Branch) -> Result<MixedPhaseResult> {
    let block = occupied_block(params, branch);
    let theta = mixing_angle(params, block);
    let r = crate::reduced::purity_parameter(theta);
    if r.abs() <= MARGINAL_DEGENERACY_TOL {
        return Err(Error::DegenerateMarginal { r });
    }
    let (p1, p2) = (0.5 * (1.0 + r), 0.5 * (1.0 - r));
    let b1 = eigenstate_berry_phase(theta, block);
    let z = C64::from_polar(p1, b1) + C64::from_polar(p2, BETA_TWO);
    Ok(MixedPhaseResult {
        gamma_phase: z.arg(),
        weights: (p1, p2),
        eigenphases: (b1, BETA_TWO),
        visibility: z.norm(),
    })
}

/// Interferometric phase of the ground-state two-qubit marginal.
///
/// At the origin both branches give `r = 0` and the phase is undefined
/// whichever branch is chosen.
pub fn mixed_berry_phase_two_qubit(params: &ModelParams) -> Result<MixedPhaseResult> {
    let branch = match ground_state(params).branch {
        GroundBranch::LowField => Branch::LowField,
        GroundBranch::HighField => Branch::HighField,
        GroundBranch::Degenerate => {
            // Report the marginal degeneracy first if it applies to both branches.
            let lo = mixed_berry_phase_branch(params, Branch::LowField);
            let hi = mixed_berry_phase_branch(params, Branch::HighField);
            if let (Err(e @ Error::DegenerateMarginal { .. }), Err(_)) = (&lo, &hi) {
                return Err(e.clone());
            }
            return Err(Error::AtCrossing { gamma: params.gamma, h: params.h });
        }
    };
    mixed_berry_phase_branch(params, branch)
}

/// `Γ` from the partial trace of the dense-solver ground vector: its two
/// nonzero eigenvectors are rotated and their discrete phases combined.
pub fn mixed_berry_phase_oracle(params: &ModelParams, steps: usize) -> Result<f64> {
    let branch = active_branch(params)?;
    let v = block_ground_vector(params, branch)?;
    let rho = partial_trace(&v, &[1, 2])?;
    let e = hermitian_eigensystem(rho.matrix())?;
    let (p_hi, p_lo) = (e.values[3], e.values[2]);
    if (p_hi - p_lo).abs() <= MARGINAL_DEGENERACY_TOL {
        return Err(Error::DegenerateMarginal { r: p_hi - p_lo });
    }
    let generator = [1.0, 0.0, 0.0, -1.0];
    let mut z = C64::new(0.0, 0.0);
    for k in [2, 3] {
        let beta = discrete_berry_phase(&e.vector(k), &generator, steps)?;
        z += C64::from_polar(e.values[k], beta);
    }
    Ok(z.arg())
}

/// `|p₁e^{iβ₁} + p₂|` for the ground-state marginal.
pub fn visibility(params: &ModelParams) -> Result<f64> {
    mixed_berry_phase_two_qubit(params).map(|m| m.visibility)
}

fn field_direction(theta: f64, phi: f64, block: Branch) -> [f64; 3] {
    let s = sin(theta);
    [s * cos(2.0 * phi), block.sign() * s * sin(2.0 * phi), cos(theta)]
}

/// Effective field and projected Hamiltonian of one parity block, in the
/// basis `{|000⟩, |W̄⟩}` (even) or `{|111⟩, |W⟩}` (odd).
pub fn effective_two_level_block(params: &ModelParams, block: Branch, phi: f64) -> (EffectiveField, CMatrix) {
    let ef = energy_functions(params, block);
    let theta = mixing_angle(params, block);
    let n = field_direction(theta, phi, block);
    let b = [ef.de * n[0], ef.de * n[1], ef.de * n[2]];
    // e0·1 − B·σ
    let m = CMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => C64::new(ef.e0 - b[2], 0.0),
        (1, 1) => C64::new(ef.e0 + b[2], 0.0),
        (0, 1) => -C64::new(b[0], -b[1]),
        _ => -C64::new(b[0], b[1]),
    });
    let field = EffectiveField { magnitude: ef.de, direction: n, phi: crate::math::wrap_two_pi(phi) };
    (field, m)
}

/// Effective two-level system of the ground state (low-field branch at the crossing).
pub fn effective_two_level(params: &ModelParams, phi: f64) -> (EffectiveField, CMatrix) {
    let branch = ground_state(params).active_branch().unwrap_or(Branch::LowField);
    effective_two_level_block(params, occupied_block(params, branch), phi)
}

/// Projection of `e^{−iφS_z} H e^{iφS_z}` onto the two-level basis of a block,
/// taken directly from the 8×8 matrix (the basis is rotated by `e^{iφS_z}`).
pub fn projected_hamiltonian(params: &ModelParams, block: Branch, phi: f64) -> CMatrix {
    let h = crate::model::build_hamiltonian(params);
    let d = spin::spin_z_diagonal();
    let o = block.offset();
    let w = 1.0 / libm::sqrt(3.0);
    let mut top = [C64::new(0.0, 0.0); 8];
    let mut dicke = top;
    top[o] = C64::from_polar(1.0, phi * d[o]);
    for k in 1..4 {
        dicke[o + k] = C64::from_polar(w, phi * d[o + k]);
    }
    let basis = [top, dicke];
    CMatrix::from_fn(2, |i, j| h.sandwich(&basis[i], &basis[j]))
}

/// Monopole field `∓½ n/Δ𝓔²` of a block at azimuth `φ`, upper sign even.
pub fn monopole_field_block(params: &ModelParams, block: Branch, phi: f64) -> Result<[f64; 3]> {
    let ef = energy_functions(params, block);
    if ef.de <= params.tol_degeneracy {
        return Err(Error::Singularity {
            gamma: params.gamma,
            field: params.field(block),
            delta_e: ef.de,
        });
    }
    let n = field_direction(mixing_angle(params, block), phi, block);
    let k = block_sign(block) * 0.5 / (ef.de * ef.de);
    Ok([k * n[0], k * n[1], k * n[2]])
}

/// Monopole field seen by the ground state.
pub fn monopole_field(params: &ModelParams, phi: f64) -> Result<[f64; 3]> {
    let branch = ground_state(params).active_branch().unwrap_or(Branch::LowField);
    monopole_field_block(params, occupied_block(params, branch), phi)
}

/// Flux of the monopole field through the cap `{Δ𝓔·n : polar ≤ Θ}` with
/// outward normal, swept twice as `2φ` runs over `[0, 4π]`. Three-point
/// Gauss-Legendre per polar cell and the midpoint rule in `φ`, `n` cells each;
/// the field is sampled on the surface.
pub fn monopole_flux(params: &ModelParams, block: Branch, n: usize) -> Result<f64> {
    const NODES: [(f64, f64); 3] = [(-0.774_596_669_241_483_4, 5.0 / 9.0), (0.0, 8.0 / 9.0), (0.774_596_669_241_483_4, 5.0 / 9.0)];
    let ef = energy_functions(params, block);
    let radius = ef.de;
    if radius <= params.tol_degeneracy {
        return Err(Error::Singularity { gamma: params.gamma, field: params.field(block), delta_e: radius });
    }
    let theta = mixing_angle(params, block);
    let dth = theta / n as f64;
    let dphi = TAU / n as f64;
    let strength = block_sign(block) * 0.5 / (radius * radius);
    let mut flux = 0.0;
    for i in 0..n {
        let mid = (i as f64 + 0.5) * dth;
        for &(x, w) in &NODES {
            let th = mid + 0.5 * dth * x;
            for j in 0..n {
                let az = 2.0 * (j as f64 + 0.5) * dphi;
                let normal = [sin(th) * cos(az), sin(th) * sin(az), cos(th)];
                let f = [strength * normal[0], strength * normal[1], strength * normal[2]];
                // |∂_θ r × ∂_φ r| = 2 radius² sin θ for azimuth 2φ.
                let area = 2.0 * radius * radius * sin(th) * 0.5 * w * dth * dphi;
                flux += (f[0] * normal[0] + f[1] * normal[1] + f[2] * normal[2]) * area;
            }
        }
    }
    Ok(flux)
}

/// Phase of one full double winding of the lower eigenvector of the 2×2
/// projected Hamiltonian, from the dense solver at each `φ_k`.
pub fn two_level_discrete_phase(params: &ModelParams, block: Branch, steps: usize) -> Result<f64> {
    if steps < 16 {
        return Err(Error::InvalidArgument("at least 16 steps are required"));
    }
    let lower = |k: usize| -> Result<alloc::vec::Vec<C64>> {
        let phi = TAU * k as f64 / steps as f64;
        let e = hermitian_eigensystem(&projected_hamiltonian(params, block, phi))?;
        Ok(e.vector(0))
    };
    let first = lower(0)?;
    let mut prev = first.clone();
    let mut sum = 0.0;
    for k in 1..=steps {
        let next = if k == steps { first.clone() } else { lower(k)? };
        let ov = crate::linalg::inner(&prev, &next);
        if ov.norm() < 1e-12 {
            return Err(Error::Discretization { step: k, overlap: ov.norm() });
        }
        sum += ov.arg();
        prev = next;
    }
    Ok(wrap_pi(-sum))
}
