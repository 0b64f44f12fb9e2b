//! Entropy and information calculus on tensor-factor quantum systems.
//!
//! Everything here is measured in bits: von Neumann entropy, relative
//! entropy, Holevo information, entropy exchange, and coherent
//! information all use base-2 logarithms.  Infinite divergence is a
//! dedicated [`Divergence::Infinite`] variant, never a large float.
//!
//! Multipartite systems are density operators with a declared tensor
//! factorization; factors may carry a "classical" flag asserting that the
//! state is block-diagonal along that factor (off-diagonal blocks vanish
//! within `1e-9`).  Subsystem quantities are computed by partial trace
//! followed by the scalar entropy of the reduced spectrum.

#![forbid(unsafe_code)]

mod coherent;
mod divergence;
mod entropy;
mod holevo;
mod multipartite;
mod state;

use thiserror::Error as ThisError;

/// Error type for entropy/information computations.
#[derive(Debug, ThisError)]
pub enum Error {
    /// Forwarded linear-algebra failure.
    #[error(transparent)]
    Linalg(#[from] qla_core::Error),
    /// Forwarded state/channel-object failure.
    #[error(transparent)]
    Objects(#[from] quantum_objects::Error),
    /// Factor index sets that must be disjoint are not.
    #[error("overlapping factor sets: {context}")]
    OverlappingSets { context: String },
    /// Mismatched collection sizes (alphabet vs outputs, probs vs states...).
    #[error("size mismatch: {context}")]
    SizeMismatch { context: String },
    /// Incompatible operator dimensions.
    #[error("dimension mismatch: {context}")]
    DimMismatch { context: String },
    /// A factor was flagged classical but carries coherences.
    #[error("factor {factor} flagged classical but has off-diagonal mass {residual:.3e}")]
    NotClassical { factor: usize, residual: f64 },
    /// Continuity-bound parameter outside its domain.
    #[error("theta {theta} outside the admissible range")]
    ThetaOutOfRange { theta: f64 },
    /// A probability vector failed validation.
    #[error("invalid distribution: {context}")]
    BadDistribution { context: String },
}

impl Error {
    pub(crate) fn overlapping(context: impl Into<String>) -> Self {
        Error::OverlappingSets {
            context: context.into(),
        }
    }

    pub(crate) fn size_mismatch(context: impl Into<String>) -> Self {
        Error::SizeMismatch {
            context: context.into(),
        }
    }

    pub(crate) fn dim_mismatch(context: impl Into<String>) -> Self {
        Error::DimMismatch {
            context: context.into(),
        }
    }
}

/// Validates a probability vector: entries ≥ −1e-12 and total within 1e-9
/// of one.
pub fn check_distribution(p: &[f64]) -> Result<(), Error> {
    if p.is_empty() {
        return Err(Error::BadDistribution {
            context: "empty probability vector".into(),
        });
    }
    if let Some(&bad) = p.iter().find(|&&x| x < -1e-12 || !x.is_finite()) {
        return Err(Error::BadDistribution {
            context: format!("entry {bad} is not a probability"),
        });
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::BadDistribution {
            context: format!("total {total} differs from 1 beyond 1e-9"),
        });
    }
    Ok(())
}

pub use coherent::{coherent_information, entropy_exchange};
pub use divergence::{kl_divergence, relative_entropy, Divergence};
pub use entropy::{binary_entropy, entropy_of_probs, fannes_bound, von_neumann_entropy};
pub use holevo::{channel_state, holevo_information};
pub use multipartite::{
    conditional_entropy, conditional_mutual_information, mutual_information, subsystem_entropy,
};
pub use state::{CqChannel, MultipartiteState};
