//! Support projectors: the minimal self-adjoint idempotent p with pMp = M.

use crate::hermitian::{eig_hermitian, HermitianMatrix};
use crate::{Error, HERM_TOL, RANK_TOL};

/// Projector onto the span of eigenvectors with λ > [`RANK_TOL`].
///
/// The input must be positive semidefinite (minimum eigenvalue ≥ −1e-9).
pub fn support_projector(m: &HermitianMatrix) -> Result<HermitianMatrix, Error> {
    let spectrum = eig_hermitian(m)?;
    let min_eigenvalue = spectrum.eigenvalues().last().copied().unwrap_or(0.0);
    if min_eigenvalue < -HERM_TOL {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(spectrum.projector_where(|l| l > RANK_TOL))
}

/// Projector onto the span of the union of the supports of PSD matrices of
/// a common dimension — the least projector dominating every
/// [`support_projector`] of the inputs.
pub fn least_common_support(ms: &[HermitianMatrix]) -> Result<HermitianMatrix, Error> {
    let first = ms
        .first()
        .ok_or_else(|| Error::dim_mismatch("least_common_support needs at least one matrix"))?;
    let dim = first.dim();
    if ms.iter().any(|m| m.dim() != dim) {
        return Err(Error::dim_mismatch(format!(
            "least_common_support inputs must share dimension {dim}"
        )));
    }
    // Summing the individual support projectors keeps the scales balanced
    // regardless of the input norms; the union span is the support of the sum.
    let mut sum = HermitianMatrix::zeros(dim);
    for m in ms {
        sum = &sum + &support_projector(m)?;
    }
    support_projector(&sum)
}
