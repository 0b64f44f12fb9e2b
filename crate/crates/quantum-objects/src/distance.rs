//! Fidelity, trace distance, and the tender-operator residual.

use crate::density::DensityOperator;
use crate::Error;
use qla_core::{eig_hermitian, spectral_function, trace_norm, HermitianMatrix, HERM_TOL};

/// Fidelity F(ρ,σ) = Tr(ρσ) for rank-1 ρ and arbitrary σ.
pub fn fidelity_pure(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64, Error> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim_mismatch(format!(
            "fidelity of dims {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let purity = rho.purity();
    if 1.0 - purity > 1e-8 {
        return Err(Error::NotPure { purity });
    }
    Ok(rho.matrix().trace_product(sigma.matrix()).clamp(0.0, 1.0))
}

/// Trace distance D(ρ,σ) = ½‖ρ − σ‖₁.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64, Error> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim_mismatch(format!(
            "trace distance of dims {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(0.5 * trace_norm(&(rho.matrix() - sigma.matrix())))
}

/// Tender-operator residual ‖ρ − √X ρ √X‖₁ for 0 ≤ X ≤ 𝟙 with
/// 1 − Tr(ρX) ≤ λ ≤ 1; the lemma guarantees the result is ≤ √(8λ).
///
/// The premises are enforced: [`Error::OperatorOutOfRange`] if X leaves
/// [0, 𝟙], [`Error::LambdaViolated`] if λ under-budgets the actual miss
/// probability or exceeds 1.
pub fn tender_residual(
    rho: &DensityOperator,
    x: &HermitianMatrix,
    lambda: f64,
) -> Result<f64, Error> {
    if rho.dim() != x.dim() {
        return Err(Error::dim_mismatch(format!(
            "tender operator dim {} vs state dim {}",
            x.dim(),
            rho.dim()
        )));
    }
    let spectrum = eig_hermitian(x)?;
    let max_eigenvalue = spectrum.eigenvalues().first().copied().unwrap_or(0.0);
    let min_eigenvalue = spectrum.eigenvalues().last().copied().unwrap_or(0.0);
    if min_eigenvalue < -HERM_TOL || max_eigenvalue > 1.0 + HERM_TOL {
        return Err(Error::OperatorOutOfRange {
            min_eigenvalue,
            max_eigenvalue,
        });
    }
    let observed = 1.0 - rho.expectation(x);
    if lambda > 1.0 || observed > lambda + 1e-12 {
        return Err(Error::LambdaViolated { lambda, observed });
    }
    let root = spectral_function(x, f64::sqrt)?;
    let pinched = rho.matrix().sandwich(root.matrix());
    Ok(trace_norm(&(rho.matrix() - &pinched)))
}
