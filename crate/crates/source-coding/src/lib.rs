//! Block compression schemes for memoryless quantum sources.
//!
//! A source emits `n` independent letters, each a pure state on a
//! `d`-dimensional space; the block state is the tensor power of the letter
//! average.  A compression scheme projects the block onto a retained
//! subspace `𝒦 = im Π` spanned by typical eigenindex sequences, transmits
//! `𝒦`, and re-embeds — failed projections are replaced by the maximally
//! mixed code state.  Because the projector is kept symbolically (a union
//! of type classes over a product eigenbasis), schemes at block lengths in
//! the hundreds are evaluated exactly; dense encoder/decoder channels can
//! still be materialized for small blocks to cross-check every formula.
//!
//! Provided here:
//! - the subspace scheme over the variance-typical projector of the source
//!   (rate within `K·d·α/√n` of the source entropy);
//! - the fixed-rate universal scheme over the entropy-bounded type union,
//!   which compresses every source diagonal in the declared basis;
//! - rank-limited truncation schemes (the heaviest type classes within a
//!   dimension budget), mainly as adversarial fixtures for converse bounds;
//! - fidelity evaluation — average fidelity, average distortion, and
//!   entanglement fidelity — with a symbolic path for eigenbasis-diagonal
//!   ensembles and a dense path for small blocks;
//! - the strong-converse dimension bound: any block code achieving average
//!   fidelity `1 − λ` needs a code space of at least
//!   `(1 − λ − 4√N·2^{−μ²α²})·2^{nH − Kdα√n}` dimensions for every `α > 0`.
//!
//! Conventions: entropies, rates, and all logarithms are base 2.

#![forbid(unsafe_code)]

use thiserror::Error as ThisError;

mod bounds;
mod fidelity;
mod scheme;

/// Everything this crate can fail with.
#[derive(Debug, ThisError)]
pub enum Error {
    /// Propagated linear-algebra failure.
    #[error(transparent)]
    Linalg(#[from] qla_core::Error),
    /// Propagated state/channel construction failure.
    #[error(transparent)]
    Objects(#[from] quantum_objects::Error),
    /// Propagated entropy-calculus failure.
    #[error(transparent)]
    Entropy(#[from] entropy_calc::Error),
    /// Propagated typical-projector failure.
    #[error(transparent)]
    Typicality(#[from] typicality::Error),
    /// Neither the symbolic nor the dense evaluation path fits the budget.
    #[error("computation too large: {context}")]
    TooLarge { context: String },
    /// An argument violated a precondition.
    #[error("bad argument: {context}")]
    BadArgument { context: String },
}

pub(crate) fn too_large(context: impl Into<String>) -> Error {
    Error::TooLarge {
        context: context.into(),
    }
}

pub(crate) fn bad_argument(context: impl Into<String>) -> Error {
    Error::BadArgument {
        context: context.into(),
    }
}

pub use bounds::{
    deviation_profile, max_strong_converse_dim_bound, noiseless_fidelity_bound,
    noiseless_rate_bound, strong_converse_dim_bound, strong_converse_log2_dim_bound,
    universal_fidelity_bound,
};
pub use fidelity::{
    eigenbasis_source_fidelities, entanglement_fidelity_for, scheme_fidelities, FidelityReport,
};
pub use scheme::{jhhh_scheme, schumacher_scheme, truncation_scheme, CompressionScheme};
