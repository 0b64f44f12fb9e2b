//! Purification and entanglement fidelity.

use crate::channel::KrausChannel;
use crate::density::DensityOperator;
use crate::Error;
use num_complex::Complex64;
use qla_core::{kron_vec, CMatrix, HermitianMatrix};

/// Purification vector Σⱼ √qⱼ |φⱼ⟩⊗|φⱼ⟩ in ρ's eigenbasis (system factor
/// first, reference second).
fn purification_vector(rho: &DensityOperator) -> Vec<Complex64> {
    let spectrum = rho.eig();
    let d = rho.dim();
    let mut psi = vec![Complex64::new(0.0, 0.0); d * d];
    for (j, &q) in spectrum.eigenvalues().iter().enumerate() {
        if q <= 0.0 {
            continue;
        }
        let phi = spectrum.eigenvector(j);
        let term = kron_vec(&[&phi, &phi]);
        let w = q.sqrt();
        for (slot, t) in psi.iter_mut().zip(&term) {
            *slot += t * w;
        }
    }
    psi
}

/// Canonical purification of ρ: the rank-1 state |ψ⟩⟨ψ| on dim² with
/// |ψ⟩ = Σⱼ √qⱼ |φⱼ⟩⊗|φⱼ⟩, where ρ = Σⱼ qⱼ|φⱼ⟩⟨φⱼ|. Tracing out the
/// second (reference) factor returns ρ.
pub fn purify(rho: &DensityOperator) -> DensityOperator {
    let d = rho.dim();
    let psi = purification_vector(rho);
    DensityOperator::from_valid(HermitianMatrix::from_outer(&psi), vec![d, d])
}

/// Entanglement fidelity F_e(ρ, φ) = ⟨ψ| (φ⊗id)(|ψ⟩⟨ψ|) |ψ⟩ for any
/// purification ψ of ρ; computed on the canonical one.
///
/// Purification-independence is an invariant checked in tests by comparing
/// against a second purification and against the Kraus formula
/// F_e = Σᵢ |Tr(Kᵢρ)|².
pub fn entanglement_fidelity(rho: &DensityOperator, ch: &KrausChannel) -> Result<f64, Error> {
    if ch.dim_in() != rho.dim() || ch.dim_out() != rho.dim() {
        return Err(Error::dim_mismatch(format!(
            "entanglement fidelity needs an endo-channel on dim {}, got {}→{}",
            rho.dim(),
            ch.dim_in(),
            ch.dim_out()
        )));
    }
    let psi = purification_vector(rho);
    // ⟨ψ|(φ⊗id)(ψψ†)|ψ⟩ = Σᵢ |⟨ψ| Kᵢ⊗𝟙 |ψ⟩|²
    let d = rho.dim();
    let id = CMatrix::identity(d);
    let mut total = 0.0;
    for k in ch.kraus_ops() {
        let image = qla_core::kron_apply(&[k, &id], &psi).expect("dims match by construction");
        let amp = psi
            .iter()
            .zip(&image)
            .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
        total += amp.norm_sqr();
    }
    Ok(total.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::fidelity_pure;
    use qla_core::{partial_trace, tensor_product};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn purification_of_a_pure_state_is_the_double_copy() {
        let rho = DensityOperator::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let psi = purify(&rho);
        // For pure ρ the canonical purification density is ρ⊗ρ.
        let expected = tensor_product(rho.matrix(), rho.matrix());
        assert!(psi.matrix().max_abs_diff(&expected) <= 1e-12);
    }

    #[test]
    fn purification_of_maximally_mixed_qubit_is_bell() {
        let psi = purify(&DensityOperator::maximally_mixed(2));
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityOperator::from_pure(&[c(inv, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(inv, 0.0)])
            .unwrap();
        assert!(psi.matrix().max_abs_diff(bell.matrix()) <= 1e-12);
    }

    #[test]
    fn purification_traces_back_to_the_state() {
        // A handful of deterministic mixed states of small dimension.
        for diag in [vec![0.5, 0.5], vec![0.9, 0.1], vec![0.5, 0.3, 0.2]] {
            let rho = DensityOperator::from_classical(&diag).unwrap();
            let psi = purify(&rho);
            let d = rho.dim();
            let back = partial_trace(psi.matrix(), &[d, d], &[0]).unwrap();
            assert!(back.max_abs_diff(rho.matrix()) <= 1e-9);
        }
    }

    #[test]
    fn identity_channel_has_unit_entanglement_fidelity() {
        let rho = DensityOperator::from_classical(&[0.6, 0.4]).unwrap();
        let fe = entanglement_fidelity(&rho, &KrausChannel::identity(2)).unwrap();
        assert!((fe - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn pure_input_reduces_to_output_fidelity() {
        let rho = DensityOperator::from_pure(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let ch = KrausChannel::depolarizing(2);
        let fe = entanglement_fidelity(&rho, &ch).unwrap();
        let f = fidelity_pure(&rho, &ch.apply(&rho).unwrap()).unwrap();
        assert!((fe - f).abs() <= 1e-10);
    }

    #[test]
    fn kraus_trace_formula_agrees() {
        // F_e = Σᵢ |Tr(Kᵢρ)|², an independent route.
        let rho = DensityOperator::from_classical(&[0.7, 0.2, 0.1]).unwrap();
        let ch = KrausChannel::depolarizing(3);
        let fe = entanglement_fidelity(&rho, &ch).unwrap();
        let by_traces: f64 = ch
            .kraus_ops()
            .iter()
            .map(|k| k.matmul(rho.matrix().matrix()).trace().norm_sqr())
            .sum();
        assert!((fe - by_traces).abs() <= 1e-10);
    }
}
