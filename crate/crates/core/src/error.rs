use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(&'static str),

    #[error("crossing line h_c(γ) = (2/3)√γ is undefined for γ = {gamma} < 0")]
    NegativeAnisotropy { gamma: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density operator: {reason} ({value:e})")]
    InvalidState { reason: &'static str, value: f64 },

    #[error("ground state is degenerate at the crossing (γ = {gamma}, h = {h}); quantity is branch dependent")]
    AtCrossing { gamma: f64, h: f64 },

    #[error("near-degeneracy: excitation gap {gap:e} is below tolerance")]
    NearDegeneracy { gap: f64 },

    #[error("monopole singularity: Δ𝓔 = {delta_e:e} at γ = {gamma}, field argument {field} (monopoles sit at (1, ±1/3))")]
    Singularity { gamma: f64, field: f64, delta_e: f64 },

    #[error("mixed-state phase undefined: marginal has nonzero degenerate eigenvalues (r = {r:e})")]
    DegenerateMarginal { r: f64 },

    #[error("∂Θ/∂h is undefined on the isotropic line (γ = {gamma})")]
    DerivativeUndefined { gamma: f64 },

    #[error("discretization failure: overlap magnitude {overlap:e} at step {step}")]
    Discretization { step: usize, overlap: f64 },

    #[error("oracle inconsistency: fidelity {value} outside [0, 1]")]
    OracleInconsistency { value: f64 },
}
