//! The classical–quantum channel state γ = Σₓ P(x)·[x]⊗W_x and the Holevo
//! information I(P;W) = H(PW) − Σₓ P(x)H(W_x).

use qla_core::{CMatrix, HermitianMatrix};
use quantum_objects::DensityOperator;

use crate::entropy::von_neumann_entropy;
use crate::state::{CqChannel, MultipartiteState};
use crate::Error;

fn check_input(p: &[f64], w: &CqChannel) -> Result<(), Error> {
    crate::check_distribution(p)?;
    if p.len() != w.alphabet_size() {
        return Err(Error::size_mismatch(format!(
            "{} probabilities vs {} channel letters",
            p.len(),
            w.alphabet_size()
        )));
    }
    Ok(())
}

/// The joint state γ = Σₓ P(x)·[x]⊗W_x: block-diagonal with blocks
/// P(x)·W_x, classical first factor of dimension |X|, quantum second
/// factor of dimension d.
pub fn channel_state(p: &[f64], w: &CqChannel) -> Result<MultipartiteState, Error> {
    check_input(p, w)?;
    let a = w.alphabet_size();
    let d = w.output_dim();
    let mut joint = CMatrix::zeros(a * d, a * d);
    for (x, &px) in p.iter().enumerate() {
        let block = w.output(x).matrix().matrix();
        for i in 0..d {
            for j in 0..d {
                joint.set(x * d + i, x * d + j, block.get(i, j) * px.max(0.0));
            }
        }
    }
    let state = DensityOperator::from_valid(
        HermitianMatrix::from_symmetrized(joint),
        vec![a, d],
    );
    MultipartiteState::new(state, vec!["X".into(), "Y".into()], vec![true, false])
}

/// Holevo information I(P;W) = H(PW) − Σₓ P(x)·H(W_x), in [0, log₂ d].
pub fn holevo_information(p: &[f64], w: &CqChannel) -> Result<f64, Error> {
    check_input(p, w)?;
    let avg = w.average_output(p)?;
    let conditional: f64 = w
        .outputs()
        .iter()
        .zip(p)
        .map(|(wx, &px)| {
            if px > 0.0 {
                px * von_neumann_entropy(wx)
            } else {
                0.0
            }
        })
        .sum();
    Ok((von_neumann_entropy(&avg) - conditional).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::{binary_entropy, entropy_of_probs, mutual_information};

    fn bsc(p_flip: f64) -> CqChannel {
        CqChannel::from_outputs(vec![
            DensityOperator::from_classical(&[1.0 - p_flip, p_flip]).unwrap(),
            DensityOperator::from_classical(&[p_flip, 1.0 - p_flip]).unwrap(),
        ])
        .unwrap()
    }

    fn zero_plus_channel() -> CqChannel {
        let zero = DensityOperator::from_pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        let plus = DensityOperator::from_pure(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)])
            .unwrap();
        CqChannel::from_outputs(vec![zero, plus]).unwrap()
    }

    #[test]
    fn point_mass_channel_state_is_a_single_block() {
        let w = bsc(0.1);
        let gamma = channel_state(&[1.0, 0.0], &w).unwrap();
        // [0]⊗W_0: top-left block is W_0, everything else zero.
        let m = gamma.state().matrix().matrix();
        assert!((m.get(0, 0).re - 0.9).abs() <= 1e-12);
        assert!((m.get(1, 1).re - 0.1).abs() <= 1e-12);
        assert!(m.get(2, 2).norm() <= 1e-12);
        assert!(m.get(3, 3).norm() <= 1e-12);
    }

    #[test]
    fn classical_marginal_of_channel_state_is_the_average_output() {
        let w = zero_plus_channel();
        let p = [0.3, 0.7];
        let gamma = channel_state(&p, &w).unwrap();
        let marginal = gamma.reduce(&[1]).unwrap();
        let avg = w.average_output(&p).unwrap();
        assert!(marginal.state().matrix().max_abs_diff(avg.matrix()) <= 1e-12);
    }

    #[test]
    fn channel_state_mutual_information_equals_holevo() {
        let w = zero_plus_channel();
        for &p0 in &[0.1, 0.35, 0.5, 0.8] {
            let p = [p0, 1.0 - p0];
            let gamma = channel_state(&p, &w).unwrap();
            let via_state = mutual_information(&gamma, &[0], &[1]).unwrap();
            let via_formula = holevo_information(&p, &w).unwrap();
            assert!((via_state - via_formula).abs() <= 1e-10);
        }
    }

    #[test]
    fn embedded_binary_symmetric_channel_information() {
        let w = bsc(0.1);
        let chi = holevo_information(&[0.5, 0.5], &w).unwrap();
        let classical = 1.0 - binary_entropy(0.1).unwrap();
        assert!((chi - classical).abs() <= 1e-12);
    }

    #[test]
    fn identical_outputs_carry_nothing() {
        let w = CqChannel::from_outputs(vec![
            DensityOperator::maximally_mixed(2),
            DensityOperator::maximally_mixed(2),
        ])
        .unwrap();
        assert!(holevo_information(&[0.4, 0.6], &w).unwrap() <= 1e-12);
    }

    #[test]
    fn pure_state_pair_information_matches_analytic_eigenvalues() {
        // Uniform {|0⟩, |+⟩}: average state has eigenvalues (1 ± 2^{-1/2})/2
        // and the outputs are pure, so χ = H(average).
        let w = zero_plus_channel();
        let chi = holevo_information(&[0.5, 0.5], &w).unwrap();
        let lam = 0.5 + 0.5 / 2.0_f64.sqrt();
        let expected = entropy_of_probs(&[lam, 1.0 - lam]);
        assert!((chi - expected).abs() <= 1e-12);
    }
}
