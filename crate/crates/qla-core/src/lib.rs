//! Complex Hermitian linear-algebra substrate: eigendecomposition, spectral
//! calculus, tensor algebra, norms, and support projectors.
//!
//! Conventions shared by every crate in this workspace:
//!
//! * All logarithms and exponentials in information-theoretic quantities are
//!   base 2; natural-log variants are named explicitly where they appear.
//! * Matrices are dense, row-major, complex double precision. The intended
//!   scale is dimension ≤ 2¹²; there are no sparse or structured solvers.
//! * Tolerances: Hermiticity / positivity / trace checks use [`HERM_TOL`],
//!   completeness checks of operator families (Kraus, POVM) use
//!   [`COMPLETENESS_TOL`], and eigenvalues with |λ| ≤ [`RANK_TOL`] count as
//!   kernel directions.
//! * Degenerate eigenvalues: the eigenvector choice inside a degenerate
//!   block is unspecified. Downstream code must be basis-free — a function
//!   of spectral projectors, never of individual eigenvectors within a
//!   degenerate block.
//!
//! Everything here is value-semantic and free of shared mutable state, so
//! all functions are safe to call concurrently.

#![forbid(unsafe_code)]

pub mod batch;
mod cmatrix;
mod hermitian;
mod norms;
mod orthonormal;
mod spectral;
mod support;
mod tensor;

pub use cmatrix::{vdot, vnorm, CMatrix};
pub use hermitian::{eig_hermitian, HermitianMatrix, Spectrum};
pub use norms::{operator_norm, trace_norm};
pub use num_complex::Complex64;
pub use orthonormal::{extend_orthonormal, orthonormalize_columns};
pub use spectral::spectral_function;
pub use support::{least_common_support, support_projector};
pub use tensor::{kron_apply, kron_vec, partial_trace, tensor_all, tensor_power, tensor_product};

/// Tolerance for Hermiticity, positivity, and trace checks.
pub const HERM_TOL: f64 = 1e-9;

/// Tolerance for completeness checks of operator families (Σᵢ Kᵢ†Kᵢ = 𝟙,
/// POVM sums, isometry columns).
pub const COMPLETENESS_TOL: f64 = 1e-8;

/// Eigenvalues with |λ| at or below this cutoff count as kernel directions
/// when computing ranks, supports, and spectral functions.
pub const RANK_TOL: f64 = 1e-9;

/// Errors reported by the linear-algebra layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A matrix failed the Hermitian symmetry check.
    #[error("matrix is not Hermitian: max |M − M†| entry {residual:.3e} exceeds tolerance {tol:.1e}")]
    NonHermitian { residual: f64, tol: f64 },
    /// A matrix required to be positive semidefinite has a negative eigenvalue.
    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },
    /// Shapes or index sets do not line up.
    #[error("dimension mismatch: {context}")]
    DimMismatch { context: String },
    /// A scalar function was applied to a spectrum containing a nonzero
    /// eigenvalue where the function is undefined.
    #[error("scalar function undefined at nonzero eigenvalue {eigenvalue:.6e}")]
    DomainError { eigenvalue: f64 },
    /// The iterative eigensolver failed to reach its off-diagonal target.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {off_diagonal:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
}

impl Error {
    /// Convenience constructor for [`Error::DimMismatch`].
    pub fn dim_mismatch(context: impl Into<String>) -> Self {
        Error::DimMismatch {
            context: context.into(),
        }
    }
}
