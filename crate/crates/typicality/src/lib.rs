//! Typical sets and typical projectors over product eigenbases.
//!
//! Projectors onto "typical" eigenindex sequences of a tensor-power state are
//! the workhorses of block compression and channel coding.  Materializing them
//! densely is hopeless beyond a handful of positions (the ambient dimension is
//! `d^n`), but every projector in this family is a union of *type classes*:
//! sets of sequences sharing an empirical letter count per position group.
//! This crate therefore represents projectors symbolically — a product
//! eigenbasis per group of positions plus a list of retained type vectors —
//! and computes traces, eigenvalue ("pinched") weights, and probability
//! masses by multinomial arithmetic in log2 space.  Block lengths in the
//! hundreds are routine; a dense `HermitianMatrix` can still be produced for
//! small systems to cross-check the symbolic arithmetic.
//!
//! Provided families:
//! - variance-typical sets (classical) and projectors, window
//!   `|N(j) − n·q_j| ≤ α·√(q_j(1−q_j))·√n`;
//! - entropy-typical projectors for heterogeneous position lists, window
//!   `|Σ −log2 q − Σ H| ≤ δ√n`;
//! - constant-typical projectors, window `|N(j) − n·q_j| ≤ δ√n`;
//! - exact-type projectors (window width zero) and their conditional variant;
//! - bounded-entropy unions `Π_{H(·)≤L}`, `Π_{H(·)≥L}` and the
//!   basis-restricted fixed-rate union used for universal compression;
//! - conditional variance-typical projectors for classical-quantum channels.
//!
//! Alongside the projectors live the abstract shadow bound, a simplex-grid
//! minimizer for divergence-under-entropy-constraint oracles, and the
//! blow-up operator `Γ^l` (least common support over all quantum operations
//! confined to `l` positions).
//!
//! Conventions: entropies and all logarithms are base 2 throughout.

#![forbid(unsafe_code)]

use thiserror::Error as ThisError;

mod blowup;
mod class_set;
mod oracle;
mod projector;
mod shadow;
mod types;

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
    /// A symbolic or dense computation would exceed the enumeration budget.
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

/// Sharpest constant `K` with `Σ_j −√q_j·log2 √q_j ≤ K·d/2` over
/// probability vectors of length `d`: the maximum of `−√x·log2 x` is
/// attained at `x = e⁻²`, giving `K = 2·log2(e)/e`.
///
/// It controls the pinched-weight window of variance-typical projectors:
/// every retained sequence has `|−log2(weight) − n·H(ρ)| ≤ K·d·α·√n`.
pub const K_TYPICAL: f64 = 2.0 * std::f64::consts::LOG2_E / std::f64::consts::E;

/// Variance bound for `−log2 q` under any distribution `q` on `d ≥ 2`
/// letters: `max{(log2 3)², (log2 d)²}`.  Chebyshev with this constant
/// yields the mass guarantee of entropy-typical projectors.
pub fn entropy_window_variance_bound(dim: usize) -> f64 {
    let log3 = 3f64.log2();
    let logd = (dim.max(2) as f64).log2();
    (log3 * log3).max(logd * logd)
}

/// `η(t) = −t·log2 t` (continuity modulus used by size bounds); `η(0) = 0`.
pub fn eta_modulus(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -t * t.log2()
    }
}

/// Which side of an entropy threshold a type must fall on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Retain types with entropy ≤ the threshold.
    AtMost,
    /// Retain types with entropy ≥ the threshold.
    AtLeast,
}

pub use blowup::{blow_up, blow_up_symbolic};
pub use class_set::{variance_typical_set, TypeClassSet};
pub use oracle::{grid_minimize, min_divergence_with_entropy, GridObjective};
pub use projector::{
    bounded_entropy_projector, conditional_variance_typical_projector, constant_typical_projector,
    entropy_typical_projector, exact_cond_type_projector, exact_type_projector, jhhh_projector,
    truncated_weight_projector, variance_typical_projector, GroupSpectrum, TypicalProjector,
};
pub use shadow::{shadow_bound, verify_shadow};
pub use types::{count_types, enumerate_types, TypeVector};
