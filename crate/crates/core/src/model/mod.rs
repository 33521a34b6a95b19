//! Hamiltonian, closed-form spectrum, mixing angle and crossing line.
//!
//! In the basis [`BASIS`] the Hamiltonian is block diagonal with the 4×4
//! parity blocks `P(γ, h)` (even, built on `|000⟩`) and `P(γ, −h)` (odd,
//! built on `|111⟩`). Each block has a bright pair `𝓔₀ ± Δ𝓔` mixing the top
//! state with the symmetric Dicke state, and a dark doublet at `−𝓔₀`:
//!
//! ```text
//! 𝓔₀(γ, h) = (3h − 1 − γ)/6
//! Δ𝓔(γ, h) = (1/3) √(9h² + 3h(1+γ) + 1 − γ + γ²)
//! V₋ = cos(Θ/2)|000⟩ + sin(Θ/2)|W̄⟩,   V₊ = −sin(Θ/2)|000⟩ + cos(Θ/2)|W̄⟩
//! ```
//!
//! `Θ` is fixed in `[0, 2π)` by `cos Θ = −(6h+1+γ)/(6Δ𝓔)` and
//! `sin Θ = −√3(γ−1)/(6Δ𝓔)`.

mod ground;
pub mod spin;

pub use ground::{
    branch_state, classify_branch, classify_ground_state, ground_state, BranchState,
    GroundBranch, GroundState, GroundStateClass, StateClass,
};

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ZERO};
use crate::math::{atan2, sqrt, wrap_two_pi};

/// Computational bit strings (qubit 1 most significant) in storage order.
pub const BASIS: [u8; 8] = [0b000, 0b011, 0b101, 0b110, 0b111, 0b100, 0b010, 0b001];

/// Eight complex amplitudes in [`BASIS`] order.
pub type State = [C64; 8];

pub const DEFAULT_TOL_DEGENERACY: f64 = 1e-9;

/// The trivial crossing `h_c = 0`, where the two blocks are mirror images.
pub const LOW_FIELD_CROSSING: f64 = 0.0;

/// `(γ, |field|)` of the two conical intersections; the gap closes at
/// `(1, −1/3)` in each block, i.e. at `h = ∓1/3`.
pub const MONOPOLE: (f64, f64) = (1.0, 1.0 / 3.0);

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub gamma: f64,
    pub h: f64,
    pub tol_degeneracy: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, h: f64) -> Result<Self> {
        Self::with_tolerance(gamma, h, DEFAULT_TOL_DEGENERACY)
    }

    pub fn with_tolerance(gamma: f64, h: f64, tol_degeneracy: f64) -> Result<Self> {
        if !gamma.is_finite() || !h.is_finite() {
            return Err(Error::InvalidParams("gamma and h must be finite"));
        }
        if !(tol_degeneracy.is_finite() && tol_degeneracy > 0.0) {
            return Err(Error::InvalidParams("tol_degeneracy must be positive and finite"));
        }
        Ok(Self { gamma, h, tol_degeneracy })
    }

    /// Field argument seen by a block: `+h` for the even block, `−h` for the odd one.
    pub fn field(&self, branch: Branch) -> f64 {
        branch.sign() * self.h
    }

    /// The `h ≥ 0` representative and whether the bit flip `σx⊗σx⊗σx` was used.
    pub fn canonical(&self) -> (Self, bool) {
        let mirrored = self.h < 0.0;
        (Self { h: self.h.abs(), ..*self }, mirrored)
    }
}

/// Parity block, named after the regime where its bright state is the ground state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// Even block `P(γ, h)`, top state `|000⟩`.
    LowField,
    /// Odd block `P(γ, −h)`, top state `|111⟩`.
    HighField,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::LowField, Branch::HighField];

    pub fn sign(self) -> f64 {
        match self {
            Branch::LowField => 1.0,
            Branch::HighField => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Branch::LowField => Branch::HighField,
            Branch::HighField => Branch::LowField,
        }
    }

    /// First storage index of the block.
    pub fn offset(self) -> usize {
        match self {
            Branch::LowField => 0,
            Branch::HighField => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyFunctions {
    pub e0: f64,
    pub de: f64,
    pub e_minus: f64,
    pub e_plus: f64,
}

/// `Δ𝓔` radicand; negative floating noise is clamped to zero.
fn radicand(gamma: f64, field: f64) -> f64 {
    let r = 9.0 * field * field + 3.0 * field * (1.0 + gamma) + 1.0 - gamma + gamma * gamma;
    r.max(0.0)
}

pub fn energy_functions_at(gamma: f64, field: f64) -> EnergyFunctions {
    let e0 = (3.0 * field - 1.0 - gamma) / 6.0;
    let de = sqrt(radicand(gamma, field)) / 3.0;
    EnergyFunctions { e0, de, e_minus: e0 - de, e_plus: e0 + de }
}

pub fn energy_functions(params: &ModelParams, branch: Branch) -> EnergyFunctions {
    energy_functions_at(params.gamma, params.field(branch))
}

/// `Θ(γ, field) ∈ [0, 2π)`.
///
/// Written as `atan2(sin Θ, cos Θ)` with both arguments rationalized, which is
/// the double-angle form `2·atan2(√3(γ−1), A − 6Δ𝓔)` without its 0/0 on the
/// isotropic line: at `γ = 1` it yields `π` for `field > −1/3` and `0` below.
pub fn mixing_angle_at(gamma: f64, field: f64) -> f64 {
    let a = 6.0 * field + 1.0 + gamma;
    let n = SQRT_3 * (gamma - 1.0);
    wrap_two_pi(atan2(-n, -a))
}

pub fn mixing_angle(params: &ModelParams, branch: Branch) -> f64 {
    mixing_angle_at(params.gamma, params.field(branch))
}

/// Closed-form spectrum of both blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    pub e0_plus: f64,
    pub de_plus: f64,
    pub e0_minus: f64,
    pub de_minus: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
    pub e_degenerate_plus: f64,
    pub e_degenerate_minus: f64,
}

impl Spectrum {
    pub fn new(params: &ModelParams) -> Self {
        let p = energy_functions(params, Branch::LowField);
        let m = energy_functions(params, Branch::HighField);
        Self {
            e0_plus: p.e0,
            de_plus: p.de,
            e0_minus: m.e0,
            de_minus: m.de,
            theta_plus: mixing_angle(params, Branch::LowField),
            theta_minus: mixing_angle(params, Branch::HighField),
            e_degenerate_plus: -p.e0,
            e_degenerate_minus: -m.e0,
        }
    }

    /// Lower bright level of a block.
    pub fn lower(&self, branch: Branch) -> f64 {
        match branch {
            Branch::LowField => self.e0_plus - self.de_plus,
            Branch::HighField => self.e0_minus - self.de_minus,
        }
    }

    /// All eight eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 8] {
        let mut e = [
            self.e0_plus - self.de_plus,
            self.e0_plus + self.de_plus,
            self.e_degenerate_plus,
            self.e_degenerate_plus,
            self.e0_minus - self.de_minus,
            self.e0_minus + self.de_minus,
            self.e_degenerate_minus,
            self.e_degenerate_minus,
        ];
        e.sort_by(f64::total_cmp);
        e
    }
}

/// The 4×4 block `P(γ, field)` on `{top, |011⟩, |101⟩, |110⟩}` (or the odd analogue).
pub fn block_matrix(gamma: f64, field: f64) -> CMatrix {
    let a = -(1.0 - gamma) / 6.0;
    let b = -(1.0 + gamma) / 6.0;
    let d = 1.5 * field;
    let e = -0.5 * field;
    CMatrix::from_real_rows([[d, a, a, a], [a, e, b, b], [a, b, e, b], [a, b, b, e]])
}

/// `H(γ, h)` assembled block by block, exactly block diagonal.
pub fn build_hamiltonian(params: &ModelParams) -> CMatrix {
    let mut m = CMatrix::zeros(8);
    for branch in Branch::BOTH {
        let p = block_matrix(params.gamma, params.field(branch));
        let o = branch.offset();
        for i in 0..4 {
            for j in 0..4 {
                m[(o + i, o + j)] = p[(i, j)];
            }
        }
    }
    m
}

/// Which closed-form eigenvector of a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    /// `𝓔₀ − Δ𝓔`
    Lower,
    /// `𝓔₀ + Δ𝓔`
    Upper,
    /// `(|a⟩ − |c⟩)/√2` at `−𝓔₀`
    DoubletOne,
    /// `(|a⟩ − 2|b⟩ + |c⟩)/√6` at `−𝓔₀`
    DoubletTwo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenpair {
    pub branch: Branch,
    pub level: Level,
    pub energy: f64,
    pub vector: State,
}

/// Bright-pair vector of a block for a given mixing angle:
/// `cos(Θ/2)|top⟩ + sin(Θ/2)|Dicke⟩` for [`Level::Lower`].
pub fn bright_vector(branch: Branch, level: Level, theta: f64) -> State {
    let c = libm::cos(0.5 * theta);
    let s = libm::sin(0.5 * theta);
    let (top, dicke) = match level {
        Level::Lower => (c, s),
        Level::Upper => (-s, c),
        _ => panic!("bright_vector takes Level::Lower or Level::Upper"),
    };
    let mut v = [ZERO; 8];
    let o = branch.offset();
    v[o] = C64::new(top, 0.0);
    let w = dicke / SQRT_3;
    for k in 1..4 {
        v[o + k] = C64::new(w, 0.0);
    }
    v
}

fn doublet_vector(branch: Branch, level: Level) -> State {
    let mut v = [ZERO; 8];
    let o = branch.offset();
    match level {
        Level::DoubletOne => {
            let x = core::f64::consts::FRAC_1_SQRT_2;
            v[o + 1] = C64::new(x, 0.0);
            v[o + 3] = C64::new(-x, 0.0);
        }
        Level::DoubletTwo => {
            let x = 1.0 / sqrt(6.0);
            v[o + 1] = C64::new(x, 0.0);
            v[o + 2] = C64::new(-2.0 * x, 0.0);
            v[o + 3] = C64::new(x, 0.0);
        }
        _ => unreachable!(),
    }
    v
}

/// All eight closed-form eigenpairs, block by block (not sorted).
pub fn eigensystem_closed_form(params: &ModelParams) -> [Eigenpair; 8] {
    let mut out = [Eigenpair {
        branch: Branch::LowField,
        level: Level::Lower,
        energy: 0.0,
        vector: [ZERO; 8],
    }; 8];
    let mut k = 0;
    for branch in Branch::BOTH {
        let ef = energy_functions(params, branch);
        let theta = mixing_angle(params, branch);
        for level in [Level::Lower, Level::Upper, Level::DoubletOne, Level::DoubletTwo] {
            let (energy, vector) = match level {
                Level::Lower => (ef.e_minus, bright_vector(branch, level, theta)),
                Level::Upper => (ef.e_plus, bright_vector(branch, level, theta)),
                _ => (-ef.e0, doublet_vector(branch, level)),
            };
            out[k] = Eigenpair { branch, level, energy, vector };
            k += 1;
        }
    }
    out
}

/// `h_c = (2/3)√γ`, where the two lower bright levels cross.
pub fn crossing_field(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::NegativeAnisotropy { gamma });
    }
    Ok(2.0 * sqrt(gamma) / 3.0)
}

/// Euclidean distance in the `(γ, h)` plane to the curve `h = (2/3)√γ`, `γ ≥ 0`.
pub fn distance_to_crossing_line(gamma: f64, h: f64) -> f64 {
    // Points on the curve are (t², 2t/3); stationarity gives
    // t³ + (2/9 − γ) t − h/3 = 0.
    let dist2 = |t: f64| {
        let dg = gamma - t * t;
        let dh = h - 2.0 * t / 3.0;
        dg * dg + dh * dh
    };
    let mut best = dist2(0.0);
    for t in cubic_real_roots(2.0 / 9.0 - gamma, -h / 3.0) {
        if t > 0.0 {
            best = best.min(dist2(t));
        }
    }
    sqrt(best)
}

/// Distance to the nearer of the two conical intersections `(1, ±1/3)`.
pub fn distance_to_monopole(gamma: f64, h: f64) -> f64 {
    let (g0, f0) = MONOPOLE;
    let dg = gamma - g0;
    libm::hypot(dg, h - f0).min(libm::hypot(dg, h + f0))
}

/// Real roots of `t³ + p t + q = 0`, Newton-polished.
fn cubic_real_roots(p: f64, q: f64) -> impl Iterator<Item = f64> {
    let mut roots = [f64::NAN; 3];
    let disc = q * q / 4.0 + p * p * p / 27.0;
    if disc > 0.0 {
        let s = sqrt(disc);
        roots[0] = libm::cbrt(-q / 2.0 + s) + libm::cbrt(-q / 2.0 - s);
    } else if p == 0.0 {
        roots[0] = 0.0;
    } else {
        let m = 2.0 * sqrt(-p / 3.0);
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = libm::acos(arg) / 3.0;
        for (k, r) in roots.iter_mut().enumerate() {
            *r = m * libm::cos(phi - 2.0 * PI * k as f64 / 3.0);
        }
    }
    roots.into_iter().filter(|t| t.is_finite()).map(move |mut t| {
        for _ in 0..3 {
            let f = t * t * t + p * t + q;
            let df = 3.0 * t * t + p;
            if df != 0.0 {
                t -= f / df;
            }
        }
        t
    })
}
