//! The abstract shadow bound.
//!
//! If `Λ` captures mass `1 − λ` from `ρ` and the compression `√Λ ρ √Λ` is
//! bounded above by `μ₂·Λ`, then any η-shadow `B` of `ρ` (an operator
//! `0 ≤ B ≤ 𝟙` with `Tr(ρB) ≥ η`) must have trace at least
//! `(η − √(8λ))/μ₂` — the tender-operator estimate pays the `√(8λ)`.  When
//! `ρ` and `Λ` commute the toll drops to `λ`, giving `(η − λ)/μ₂`.

use qla_core::{eig_hermitian, HermitianMatrix};
use quantum_objects::DensityOperator;

use crate::{bad_argument, Error};

/// Numeric slack for the 0 ≤ B ≤ 𝟙 and mass checks.
const SHADOW_TOL: f64 = 1e-9;

/// Lower bound on `Tr B` for any η-shadow of a state that a projector with
/// mass defect `λ` pinches down to weight at most `μ₂`:
/// `(η − √(8λ))/μ₂`, improved to `(η − λ)/μ₂` in the commuting case.
pub fn shadow_bound(eta: f64, lambda: f64, mu2: f64, commuting: bool) -> Result<f64, Error> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(bad_argument(format!("shadow mass η must be in [0,1], got {eta}")));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(bad_argument(format!(
            "mass defect λ must be finite and ≥ 0, got {lambda}"
        )));
    }
    if !(mu2 > 0.0) || !mu2.is_finite() {
        return Err(bad_argument(format!(
            "pinched weight μ₂ must be finite and > 0, got {mu2}"
        )));
    }
    let toll = if commuting { lambda } else { (8.0 * lambda).sqrt() };
    Ok((eta - toll) / mu2)
}

/// Checks that `B` is an η-shadow of `ρ`: `0 ≤ B ≤ 𝟙` within 1e-9 and
/// `Tr(ρB) ≥ η − 1e-9`.
pub fn verify_shadow(
    b: &HermitianMatrix,
    rho: &DensityOperator,
    eta: f64,
) -> Result<bool, Error> {
    if b.dim() != rho.dim() {
        return Err(bad_argument(format!(
            "shadow dimension {} does not match state dimension {}",
            b.dim(),
            rho.dim()
        )));
    }
    let spectrum = eig_hermitian(b)?;
    let in_range = spectrum
        .eigenvalues()
        .iter()
        .all(|&x| x >= -SHADOW_TOL && x <= 1.0 + SHADOW_TOL);
    let mass = rho.matrix().trace_product(b);
    Ok(in_range && mass >= eta - SHADOW_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_a_full_shadow() {
        let rho = DensityOperator::maximally_mixed(3);
        let id = HermitianMatrix::identity(3);
        assert!(verify_shadow(&id, &rho, 1.0).unwrap());
        let bound = shadow_bound(1.0, 0.0, 1.0 / 3.0, true).unwrap();
        assert!(id.trace() >= bound - 1e-12);
        assert!((bound - 3.0).abs() < 1e-12);
    }

    #[test]
    fn commuting_bound_is_tight_for_the_projector_itself() {
        // ρ uniform on a rank-2 subspace of dimension 3; Λ that subspace's
        // projector: λ = 0, μ₂ = 1/2, and B = Λ is a 1-shadow with
        // Tr Λ = 2 = 1/μ₂ exactly.
        let rho = DensityOperator::from_classical(&[0.5, 0.5, 0.0]).unwrap();
        let lam = HermitianMatrix::from_diag(&[1.0, 1.0, 0.0]);
        assert!(verify_shadow(&lam, &rho, 1.0).unwrap());
        let bound = shadow_bound(1.0, 0.0, 0.5, true).unwrap();
        assert!((lam.trace() - bound).abs() < 1e-12);
    }

    #[test]
    fn operators_outside_the_unit_interval_are_rejected() {
        let rho = DensityOperator::maximally_mixed(2);
        let too_big = HermitianMatrix::from_diag(&[1.5, 0.0]);
        assert!(!verify_shadow(&too_big, &rho, 0.1).unwrap());
        let negative = HermitianMatrix::from_diag(&[-0.2, 1.0]);
        assert!(!verify_shadow(&negative, &rho, 0.1).unwrap());
    }

    #[test]
    fn insufficient_mass_fails_verification() {
        let rho = DensityOperator::from_classical(&[0.9, 0.1]).unwrap();
        let b = HermitianMatrix::from_diag(&[0.0, 1.0]);
        // Tr(ρB) = 0.1 < 0.5.
        assert!(!verify_shadow(&b, &rho, 0.5).unwrap());
        assert!(verify_shadow(&b, &rho, 0.1).unwrap());
    }

    #[test]
    fn preconditions_are_enforced() {
        assert!(shadow_bound(1.5, 0.0, 1.0, true).is_err());
        assert!(shadow_bound(0.5, -0.1, 1.0, true).is_err());
        assert!(shadow_bound(0.5, 0.0, 0.0, true).is_err());
        let rho = DensityOperator::maximally_mixed(2);
        let wrong_dim = HermitianMatrix::identity(3);
        assert!(verify_shadow(&wrong_dim, &rho, 0.5).is_err());
    }
}
