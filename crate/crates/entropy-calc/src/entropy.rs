//! Scalar and von Neumann entropies (bits), the binary entropy function,
//! and the entropy continuity bound.

use quantum_objects::DensityOperator;

use crate::Error;

/// Shannon entropy (bits) of a nonnegative weight vector, with the
/// convention 0·log 0 := 0.  Callers pass probability vectors; slightly
/// negative numerical noise contributes nothing.
pub fn entropy_of_probs(p: &[f64]) -> f64 {
    p.iter()
        .map(|&q| if q > 0.0 { -q * q.log2() } else { 0.0 })
        .sum()
}

/// Von Neumann entropy H(ρ) = −Tr(ρ log₂ ρ) in bits, in [0, log₂ dim].
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    entropy_of_probs(rho.eig().eigenvalues()).max(0.0)
}

/// Binary entropy h(x) = −x log₂ x − (1−x) log₂(1−x) on [0, 1].
pub fn binary_entropy(x: f64) -> Result<f64, Error> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::ThetaOutOfRange { theta: x });
    }
    Ok(entropy_of_probs(&[x, 1.0 - x]))
}

/// Entropy continuity bound −θ·log₂(θ/d) for trace-norm distance θ ≤ ½ on
/// a d-dimensional space: |H(ρ) − H(σ)| ≤ fannes_bound(‖ρ−σ‖₁, d).
pub fn fannes_bound(theta: f64, d: usize) -> Result<f64, Error> {
    if !(0.0..=0.5).contains(&theta) {
        return Err(Error::ThetaOutOfRange { theta });
    }
    if theta == 0.0 {
        return Ok(0.0);
    }
    Ok(theta * ((d as f64).log2() - theta.log2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn pure_states_have_zero_entropy() {
        let rho = DensityOperator::from_pure(&[
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        ])
        .unwrap();
        assert!(von_neumann_entropy(&rho) <= 1e-12);
    }

    #[test]
    fn maximally_mixed_qubit_has_one_bit() {
        let rho = DensityOperator::maximally_mixed(2);
        assert!((von_neumann_entropy(&rho) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn uniform_distribution_has_log_entropy() {
        let p = vec![0.125; 8];
        assert!((entropy_of_probs(&p) - 3.0).abs() <= 1e-12);
    }

    #[test]
    fn binary_entropy_endpoints_and_midpoint() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() <= 1e-15);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn continuity_bound_edges() {
        assert_eq!(fannes_bound(0.0, 7).unwrap(), 0.0);
        assert!(fannes_bound(0.6, 2).is_err());
        assert!(fannes_bound(-0.1, 2).is_err());
        // −θ log₂(θ/d) at θ=1/4, d=2: 0.25·(1+2) = 0.75.
        assert!((fannes_bound(0.25, 2).unwrap() - 0.75).abs() <= 1e-12);
    }

    /// The average state of the four-state cloned wheel (pairs |θ⟩⊗|θ⟩ for
    /// θ ∈ {0, π/4, π/2, 3π/4}) has Bell-basis eigenvalues (½, ¼, ¼, 0)
    /// and entropy exactly 3/2 bits.
    #[test]
    fn cloned_wheel_average_state_entropy() {
        let mut states = Vec::new();
        for k in 0..4 {
            let theta = std::f64::consts::PI * k as f64 / 4.0;
            let (c, s) = (theta.cos(), theta.sin());
            let pair = [c * c, c * s, s * c, s * s].map(|x| Complex64::new(x, 0.0));
            states.push(
                DensityOperator::from_pure(&pair)
                    .unwrap()
                    .with_factor_dims(&[2, 2])
                    .unwrap(),
            );
        }
        let avg = quantum_objects::Ensemble::uniform(states).unwrap().average_state();
        let mut eigs = avg.eig().eigenvalues().to_vec();
        eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((eigs[0] - 0.5).abs() <= 1e-12);
        assert!((eigs[1] - 0.25).abs() <= 1e-12);
        assert!((eigs[2] - 0.25).abs() <= 1e-12);
        assert!(eigs[3].abs() <= 1e-12);
        assert!((von_neumann_entropy(&avg) - 1.5).abs() <= 1e-12);
    }
}
