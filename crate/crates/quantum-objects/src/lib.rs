//! States, channels, and measurements: density operators, Kraus/CPTP maps
//! with Stinespring dilation, POVMs with sub-normalized variants, ensembles,
//! the fidelity/trace-distance lemmas, tender operator and tender
//! measurement, purification, entanglement fidelity, and seeded random
//! samplers for all of them.
//!
//! Fidelity convention: `fidelity_pure` computes F(ρ,σ) = Tr(ρσ), defined
//! for rank-1 ρ. General mixed–mixed (Uhlmann) fidelity is out of scope.

#![forbid(unsafe_code)]

mod channel;
mod density;
mod distance;
mod ensemble;
mod povm;
mod purification;
mod random;

pub use channel::{apply_channel, environment_state, stinespring_isometry, KrausChannel};
pub use density::DensityOperator;
pub use distance::{fidelity_pure, tender_residual, trace_distance};
pub use ensemble::Ensemble;
pub use povm::{apply_total, povm_interior, povm_total, Povm, SubPovm};
pub use purification::{entanglement_fidelity, purify};
pub use random::{random_channel, random_density, random_povm};

/// Errors reported by state/channel/measurement constructors and operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Propagated linear-algebra failure.
    #[error(transparent)]
    Linalg(#[from] qla_core::Error),
    /// Matrix is not a valid density operator (trace or positivity).
    #[error("not a valid density operator: {reason}")]
    NotDensity { reason: String },
    /// A rank-1 state was required.
    #[error("state is not pure: Tr(ρ²) = {purity:.12}")]
    NotPure { purity: f64 },
    /// Kraus family does not satisfy Σᵢ Kᵢ†Kᵢ = 𝟙.
    #[error("Kraus family is not trace preserving: completeness residual {residual:.3e}")]
    NotTracePreserving { residual: f64 },
    /// POVM elements fail positivity or (sub)normalization.
    #[error("invalid POVM: {reason}")]
    InvalidPovm { reason: String },
    /// Ensemble probabilities or states are malformed.
    #[error("invalid ensemble: {reason}")]
    InvalidEnsemble { reason: String },
    /// An operator required to satisfy 0 ≤ X ≤ 𝟙 does not.
    #[error("operator out of [0, 𝟙]: eigenvalues span [{min_eigenvalue:.3e}, {max_eigenvalue:.12}]")]
    OperatorOutOfRange {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },
    /// The tenderness premise 1 − Tr(ρX) ≤ λ ≤ 1 fails.
    #[error("tenderness premise violated: observed miss 1−Tr(ρX) = {observed:.6e}, λ = {lambda:.6e}")]
    LambdaViolated { lambda: f64, observed: f64 },
    /// Operand dimensions do not line up.
    #[error("dimension mismatch: {context}")]
    DimMismatch { context: String },
    /// A sampler was asked for an impossible shape.
    #[error("bad shape: {context}")]
    BadShape { context: String },
}

impl Error {
    pub(crate) fn dim_mismatch(context: impl Into<String>) -> Self {
        Error::DimMismatch {
            context: context.into(),
        }
    }

    pub(crate) fn bad_shape(context: impl Into<String>) -> Self {
        Error::BadShape {
            context: context.into(),
        }
    }
}
