use core::f64::consts::PI;

use super::{bright_vector, crossing_field, energy_functions_at, mixing_angle_at};
use super::{Branch, Level, ModelParams, State, BASIS};
use crate::error::{Error, Result};
use crate::linalg::{inner, C64, ZERO};

/// Lower bright eigenvector of one block, at the `h ≥ 0` representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchState {
    pub branch: Branch,
    /// Mixing angle of the block at the canonical point.
    pub theta: f64,
    pub energy: f64,
    /// Closed-form eigenvector of `H(γ, h)` itself (bit-flipped when `mirrored`).
    pub vector: State,
    /// `h < 0` was mapped onto `|h|`; the vector then lives in the other parity block.
    pub mirrored: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroundBranch {
    LowField,
    HighField,
    /// Within `tol_degeneracy` of the crossing line; both branches are ground states.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    pub branch: GroundBranch,
    pub mirrored: bool,
    pub low: BranchState,
    pub high: BranchState,
}

impl GroundState {
    pub fn state(&self, branch: Branch) -> &BranchState {
        match branch {
            Branch::LowField => &self.low,
            Branch::HighField => &self.high,
        }
    }

    /// The unique ground branch, or `None` at the crossing.
    pub fn active_branch(&self) -> Option<Branch> {
        match self.branch {
            GroundBranch::LowField => Some(Branch::LowField),
            GroundBranch::HighField => Some(Branch::HighField),
            GroundBranch::Degenerate => None,
        }
    }

    /// The ground-state branch; errors at the crossing, where it is not unique.
    pub fn active(&self, params: &ModelParams) -> Result<&BranchState> {
        self.active_branch()
            .map(|b| self.state(b))
            .ok_or(Error::AtCrossing { gamma: params.gamma, h: params.h })
    }

    pub fn is_degenerate(&self) -> bool {
        self.branch == GroundBranch::Degenerate
    }

    pub fn energy(&self) -> f64 {
        self.low.energy.min(self.high.energy)
    }
}

/// `σx⊗σx⊗σx`, which swaps storage index `i` with `i ± 4`.
pub(crate) fn bit_flip(v: &State) -> State {
    let mut out = [ZERO; 8];
    for i in 0..8 {
        out[(i + 4) % 8] = v[i];
    }
    out
}

pub fn branch_state(params: &ModelParams, branch: Branch) -> BranchState {
    let (canon, mirrored) = params.canonical();
    let field = canon.field(branch);
    let theta = mixing_angle_at(canon.gamma, field);
    let energy = energy_functions_at(canon.gamma, field).e_minus;
    let v = bright_vector(branch, Level::Lower, theta);
    let vector = if mirrored { bit_flip(&v) } else { v };
    BranchState { branch, theta, energy, vector, mirrored }
}

/// Ground state of `H(γ, h)`.
///
/// Negative `h` is handled through the bit-flip symmetry
/// `H(γ, −h) = X H(γ, h) X`, `X = σx⊗σx⊗σx`. `h = 0` sits on the trivial
/// crossing and is reported as [`GroundBranch::LowField`] by convention; for
/// `γ < 0` the lower energy decides.
pub fn ground_state(params: &ModelParams) -> GroundState {
    let (canon, mirrored) = params.canonical();
    let low = branch_state(params, Branch::LowField);
    let high = branch_state(params, Branch::HighField);
    let at_crossing = crossing_field(canon.gamma)
        .map(|hc| (canon.h - hc).abs() <= canon.tol_degeneracy && canon.h > 0.0)
        .unwrap_or(false);
    let branch = if at_crossing {
        GroundBranch::Degenerate
    } else if low.energy <= high.energy {
        GroundBranch::LowField
    } else {
        GroundBranch::HighField
    };
    GroundState { branch, mirrored, low, high }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateClass {
    W,
    Product,
    Ghz,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateClass {
    pub kind: StateClass,
    /// Squared overlap with the matched reference state.
    pub witness: f64,
}

/// GHZ reference `H⊗H⊗H (|000⟩ ± |111⟩)/√2`, whose amplitudes are `(1 ± (−1)^|b|)/4`.
fn hadamard_ghz(even: bool) -> State {
    let mut v = [ZERO; 8];
    for (i, &bits) in BASIS.iter().enumerate() {
        let parity = if bits.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        let sign = if even { 1.0 } else { -1.0 };
        v[i] = C64::new((1.0 + sign * parity) / 4.0, 0.0);
    }
    v
}

/// Uniform Dicke state of a block (`|W̄⟩` or `|W⟩`) or its top state (`|000⟩` or `|111⟩`).
fn block_reference(block: Branch, dicke: bool) -> State {
    let mut v = [ZERO; 8];
    let o = block.offset();
    if dicke {
        let w = 1.0 / libm::sqrt(3.0);
        for k in 1..4 {
            v[o + k] = C64::new(w, 0.0);
        }
    } else {
        v[o] = C64::new(1.0, 0.0);
    }
    v
}

fn overlap_sqr(a: &State, b: &State) -> f64 {
    inner(a, b).norm_sqr().min(1.0)
}

/// Classifies one branch state (needed at the crossing, where the caller picks).
pub fn classify_branch(params: &ModelParams, branch: Branch, class_tol: f64) -> GroundStateClass {
    let s = branch_state(params, branch);
    // Parity block the vector actually occupies.
    let block = if s.mirrored { branch.opposite() } else { branch };
    let w_ref = block_reference(block, true);
    let p_ref = block_reference(block, false);
    let g_ref = hadamard_ghz(block == Branch::LowField);

    let near = |target: f64| crate::math::wrap_pi(s.theta - target).abs() <= class_tol;
    let at_origin = params.gamma.abs() <= class_tol && params.h.abs() <= class_tol;

    if near(PI) {
        GroundStateClass { kind: StateClass::W, witness: overlap_sqr(&w_ref, &s.vector) }
    } else if near(0.0) {
        GroundStateClass { kind: StateClass::Product, witness: overlap_sqr(&p_ref, &s.vector) }
    } else if at_origin && near(2.0 * PI / 3.0) {
        GroundStateClass { kind: StateClass::Ghz, witness: overlap_sqr(&g_ref, &s.vector) }
    } else {
        let witness = [w_ref, p_ref, g_ref]
            .iter()
            .map(|r| overlap_sqr(r, &s.vector))
            .fold(0.0, f64::max);
        GroundStateClass { kind: StateClass::Generic, witness }
    }
}

/// Classifies the ground state as W, product, GHZ or generic.
///
/// The GHZ reference is `H⊗H⊗H (|000⟩+|111⟩)/√2`; the ground state at the
/// origin is `(|000⟩+|011⟩+|101⟩+|110⟩)/2`, which is exactly that state.
/// At the crossing the low-field branch is classified.
pub fn classify_ground_state(params: &ModelParams, class_tol: f64) -> GroundStateClass {
    let gs = ground_state(params);
    classify_branch(params, gs.active_branch().unwrap_or(Branch::LowField), class_tol)
}
