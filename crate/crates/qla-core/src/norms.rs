//! Spectral norms of Hermitian matrices.

use crate::hermitian::{eig_hermitian, HermitianMatrix};

/// Trace norm ‖M‖₁ = Σᵢ|λᵢ|, the sum of absolute eigenvalues.
///
/// Equals the variational form sup { Tr(M·B) : −𝟙 ≤ B ≤ 𝟙 }, attained by the
/// ±1 sign matrix in M's eigenbasis.
pub fn trace_norm(m: &HermitianMatrix) -> f64 {
    let spectrum = eig_hermitian(m).expect("Jacobi converges on Hermitian input");
    spectrum.eigenvalues().iter().map(|l| l.abs()).sum()
}

/// Operator norm ‖M‖∞ = maxᵢ|λᵢ|, the largest absolute eigenvalue.
pub fn operator_norm(m: &HermitianMatrix) -> f64 {
    let spectrum = eig_hermitian(m).expect("Jacobi converges on Hermitian input");
    spectrum.eigenvalues().iter().map(|l| l.abs()).fold(0.0, f64::max)
}
