//! Brute-force numerics that share no closed form with the rest of the crate.
//!
//! Ground vectors here come from diagonalizing the occupied 4×4 parity block
//! of [`build_hamiltonian`] with the Jacobi solver; everything downstream
//! (partial traces, discrete phases, fidelities) is computed from those.

mod eigen;
pub mod verify;

pub use eigen::{hermitian_eigensystem, EigenDecomposition};
pub use verify::{verify_point, CheckEntry, Outcome, VerifyConfig, VerifyReport};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fidelity::{bures_infidelity, pure_infidelity};
use crate::linalg::{CMatrix, C64, ZERO};
use crate::math::sqrt;
use crate::model::{build_hamiltonian, Branch, ModelParams, State};
use crate::reduced::{partial_trace, DensityOperator};

/// Eigenvalues in `[−PSD_TOL, 0)` are treated as rounding noise.
pub const PSD_TOL: f64 = 1e-12;
/// Eigenvalues below this are set to zero before taking square roots.
const SQRT_FLOOR: f64 = 1e-14;

/// Hermitian PSD square root via the eigendecomposition.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let e = hermitian_eigensystem(m)?;
    if let Some(&min) = e.values.first() {
        if min < -PSD_TOL {
            return Err(Error::InvalidState { reason: "negative eigenvalue", value: min });
        }
    }
    Ok(e.map_values(|x| if x < SQRT_FLOOR { 0.0 } else { sqrt(x) }))
}

/// `(2 − f(δ) − f(−δ))/δ²` for a fidelity-at-offset function with `f(0) = 1`.
pub fn fd_susceptibility(mut f: impl FnMut(f64) -> Result<f64>, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument("delta must be positive and finite"));
    }
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if !(0.0..=1.0 + 1e-9).contains(&v) {
            return Err(Error::OracleInconsistency { value: v });
        }
        Ok(v)
    };
    let f0 = eval(0.0)?;
    if (f0 - 1.0).abs() > 1e-12 {
        return Err(Error::OracleInconsistency { value: f0 });
    }
    let fp = eval(delta)?;
    let fm = eval(-delta)?;
    Ok((2.0 - fp - fm) / (delta * delta))
}

/// Same second difference, fed with `1 − F` directly to avoid cancellation.
pub fn fd_susceptibility_infidelity(
    mut g: impl FnMut(f64) -> Result<f64>,
    delta: f64,
) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument("delta must be positive and finite"));
    }
    let mut eval = |x: f64| -> Result<f64> {
        let v = g(x)?;
        if !(-1e-9..=1.0).contains(&v) {
            return Err(Error::OracleInconsistency { value: 1.0 - v });
        }
        Ok(v)
    };
    let g0 = eval(0.0)?;
    if g0.abs() > 1e-12 {
        return Err(Error::OracleInconsistency { value: 1.0 - g0 });
    }
    Ok((eval(delta)? + eval(-delta)?) / (delta * delta))
}

/// Parity block holding the branch's ground vector (the opposite one when `h < 0`).
pub(crate) fn occupied_block(params: &ModelParams, branch: Branch) -> Branch {
    if params.h < 0.0 {
        branch.opposite()
    } else {
        branch
    }
}

/// Lowest eigenvector of the occupied parity block of the dense Hamiltonian.
pub fn block_ground_vector(params: &ModelParams, branch: Branch) -> Result<State> {
    let block = occupied_block(params, branch);
    let h = build_hamiltonian(params);
    let o = block.offset();
    let p = CMatrix::from_fn(4, |i, j| h[(o + i, o + j)]);
    let e = hermitian_eigensystem(&p)?;
    let gap = e.values[1] - e.values[0];
    if gap <= params.tol_degeneracy {
        return Err(Error::NearDegeneracy { gap });
    }
    let mut v = [ZERO; 8];
    for i in 0..4 {
        v[o + i] = e.vectors[(i, 0)];
    }
    Ok(v)
}

/// Ground vector of the full 8×8 matrix; requires a nondegenerate ground level.
pub fn dense_ground_vector(params: &ModelParams) -> Result<State> {
    let e = hermitian_eigensystem(&build_hamiltonian(params))?;
    let gap = e.values[1] - e.values[0];
    if gap <= params.tol_degeneracy {
        return Err(Error::NearDegeneracy { gap });
    }
    let mut v = [ZERO; 8];
    for (i, z) in v.iter_mut().enumerate() {
        *z = e.vectors[(i, 0)];
    }
    Ok(v)
}

fn shifted(params: &ModelParams, dh: f64) -> Result<ModelParams> {
    ModelParams::with_tolerance(params.gamma, params.h + dh, params.tol_degeneracy)
}

/// Full-state susceptibility from `1 − |⟨g(h)|g(h ± δ)⟩|` of dense ground vectors
/// of the branch's parity block.
pub fn ground_state_fd_susceptibility(params: &ModelParams, branch: Branch, delta: f64) -> Result<f64> {
    let g0 = block_ground_vector(params, branch)?;
    fd_susceptibility_infidelity(
        |dh| {
            let p = shifted(params, dh)?;
            // Stay on the same parity block even if the shift crosses h = 0.
            let b = if occupied_block(&p, branch) == occupied_block(params, branch) {
                branch
            } else {
                branch.opposite()
            };
            Ok(pure_infidelity(&g0, &block_ground_vector(&p, b)?))
        },
        delta,
    )
}

/// Partial-state susceptibility from the Bures fidelity of marginals on `keep`.
pub fn marginal_fd_susceptibility(
    params: &ModelParams,
    branch: Branch,
    keep: &[usize],
    delta: f64,
) -> Result<f64> {
    let rho = |p: &ModelParams, b: Branch| -> Result<DensityOperator> {
        partial_trace(&block_ground_vector(p, b)?, keep)
    };
    let r0 = rho(params, branch)?;
    fd_susceptibility_infidelity(
        |dh| {
            let p = shifted(params, dh)?;
            let b = if occupied_block(&p, branch) == occupied_block(params, branch) {
                branch
            } else {
                branch.opposite()
            };
            bures_infidelity(&r0, &rho(&p, b)?)
        },
        delta,
    )
}

/// Discrete Pancharatnam phase of `V(φ) = e^{−iφG} v` over `φ ∈ [0, 2π]`,
/// for a diagonal generator `G`:
/// `arg⟨V₀|V_K⟩ − Σ_k arg⟨V_k|V_{k+1}⟩`, reduced into `(−π, π]`.
pub fn discrete_berry_phase(v: &[C64], generator: &[f64], steps: usize) -> Result<f64> {
    if steps < 16 {
        return Err(Error::InvalidArgument("at least 16 steps are required"));
    }
    if v.len() != generator.len() {
        return Err(Error::DimensionMismatch { left: v.len(), right: generator.len() });
    }
    // V_{k+1} = D V_k with D = e^{−iΔφG}; V_K is rebuilt directly to bound drift.
    let dphi = crate::math::TAU / steps as f64;
    let step: Vec<C64> = generator.iter().map(|&g| C64::from_polar(1.0, -dphi * g)).collect();
    let mut sum = 0.0;
    let mut prev: Vec<C64> = v.to_vec();
    let mut next = prev.clone();
    for k in 0..steps {
        if k + 1 == steps {
            for ((n, &z), &g) in next.iter_mut().zip(v).zip(generator) {
                *n = z * C64::from_polar(1.0, -crate::math::TAU * g);
            }
        } else {
            for ((n, &p), &d) in next.iter_mut().zip(&prev).zip(&step) {
                *n = p * d;
            }
        }
        let ov = crate::linalg::inner(&prev, &next);
        if ov.norm() < 1e-12 {
            return Err(Error::Discretization { step: k, overlap: ov.norm() });
        }
        sum += ov.arg();
        core::mem::swap(&mut prev, &mut next);
    }
    let closing = crate::linalg::inner(v, &prev);
    if closing.norm() < 1e-12 {
        return Err(Error::Discretization { step: steps, overlap: closing.norm() });
    }
    Ok(crate::math::wrap_pi(closing.arg() - sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_examples() {
        let half = CMatrix::identity(2).scale(C64::new(0.5, 0.0));
        let s = psd_sqrt(&half).unwrap();
        assert!((s[(0, 0)].re - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let d = psd_sqrt(&CMatrix::diagonal(&[0.25, 0.75])).unwrap();
        assert!((d[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((d[(1, 1)].re - 0.75f64.sqrt()).abs() < 1e-15);
        let v = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let p = CMatrix::outer(&v);
        assert!((&psd_sqrt(&p).unwrap() - &p).max_abs() < 1e-14);
        assert!(psd_sqrt(&CMatrix::diagonal(&[1.1, -0.1])).is_err());
    }

    #[test]
    fn fd_examples() {
        // f(δ) carries a rounding error of up to ε/2 ≈ 1.1e-16, which the
        // second difference amplifies by 2/δ² = 2e8.
        let chi = fd_susceptibility(|d| Ok(1.0 - 2.5 * d * d), 1e-4).unwrap();
        assert!((chi - 5.0).abs() <= f64::EPSILON / 1e-8);
        // With δ = 2⁻¹³ every f value is exact.
        let chi = fd_susceptibility(|d| Ok(1.0 - 2.5 * d * d), 2f64.powi(-13)).unwrap();
        assert_eq!(chi, 5.0);
        assert_eq!(fd_susceptibility(|_| Ok(1.0), 1e-4).unwrap(), 0.0);
        assert!(fd_susceptibility(|d| Ok(1.0 + d), 1e-2).is_err());
        assert!(fd_susceptibility(|_| Ok(1.0), 0.0).is_err());
        let chi = fd_susceptibility_infidelity(|d| Ok(2.5 * d * d), 1e-4).unwrap();
        assert!((chi - 5.0).abs() < 1e-8);
    }

    #[test]
    fn discrete_phase_spin_half() {
        // Spin up along a cone of polar angle θ: phase −π(1 − cos θ) for a single sweep.
        let th: f64 = 0.7;
        let v = [C64::new((th / 2.0).cos(), 0.0), C64::new((th / 2.0).sin(), 0.0)];
        let p = discrete_berry_phase(&v, &[0.5, -0.5], 4096).unwrap();
        let want = crate::math::wrap_pi(-core::f64::consts::PI * (1.0 - th.cos()));
        assert!((p - want).abs() < 1e-6);
    }
}
