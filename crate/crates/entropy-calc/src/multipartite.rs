//! Subsystem entropies, conditional entropy, and (conditional) mutual
//! information over declared tensor factors.

use crate::entropy::von_neumann_entropy;
use crate::state::MultipartiteState;
use crate::Error;

/// Checks index sets: within range, no duplicates inside any set, and no
/// element shared between sets.
fn validate_sets(m: &MultipartiteState, sets: &[&[usize]]) -> Result<(), Error> {
    let s = m.num_factors();
    let mut seen = vec![false; s];
    for set in sets {
        for &j in *set {
            if j >= s {
                return Err(Error::dim_mismatch(format!(
                    "factor index {j} out of range for {s} factors"
                )));
            }
            if seen[j] {
                return Err(Error::overlapping(format!("factor {j} appears twice")));
            }
            seen[j] = true;
        }
    }
    Ok(())
}

fn union(sets: &[&[usize]]) -> Vec<usize> {
    let mut all: Vec<usize> = sets.iter().flat_map(|s| s.iter().copied()).collect();
    all.sort_unstable();
    all
}

/// Entropy of the reduction onto factor set `j` (bits); the empty set has
/// zero entropy.
pub fn subsystem_entropy(m: &MultipartiteState, j: &[usize]) -> Result<f64, Error> {
    validate_sets(m, &[j])?;
    if j.is_empty() {
        return Ok(0.0);
    }
    Ok(von_neumann_entropy(m.reduce(j)?.state()))
}

/// Conditional entropy H(J|K) = H(JK) − H(K) over disjoint factor sets.
pub fn conditional_entropy(m: &MultipartiteState, j: &[usize], k: &[usize]) -> Result<f64, Error> {
    validate_sets(m, &[j, k])?;
    Ok(subsystem_entropy(m, &union(&[j, k]))? - subsystem_entropy(m, k)?)
}

/// Mutual information I(J∧K) = H(J) + H(K) − H(JK) over disjoint factor
/// sets.
pub fn mutual_information(m: &MultipartiteState, j: &[usize], k: &[usize]) -> Result<f64, Error> {
    validate_sets(m, &[j, k])?;
    Ok(subsystem_entropy(m, j)? + subsystem_entropy(m, k)?
        - subsystem_entropy(m, &union(&[j, k]))?)
}

/// Conditional mutual information
/// I(J∧K|L) = H(JL) + H(KL) − H(JKL) − H(L) over pairwise-disjoint sets;
/// nonnegative up to numerical slack by strong subadditivity.
pub fn conditional_mutual_information(
    m: &MultipartiteState,
    j: &[usize],
    k: &[usize],
    l: &[usize],
) -> Result<f64, Error> {
    validate_sets(m, &[j, k, l])?;
    Ok(subsystem_entropy(m, &union(&[j, l]))? + subsystem_entropy(m, &union(&[k, l]))?
        - subsystem_entropy(m, &union(&[j, k, l]))?
        - subsystem_entropy(m, l)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use qla_core::HermitianMatrix;
    use quantum_objects::DensityOperator;

    fn epr_average() -> MultipartiteState {
        // ½|00⟩⟨00| + ½|11⟩⟨11| on two qubits, both factors classical.
        let rho = DensityOperator::from_classical(&[0.5, 0.0, 0.0, 0.5])
            .unwrap()
            .with_factor_dims(&[2, 2])
            .unwrap();
        MultipartiteState::new(rho, vec!["A1".into(), "A2".into()], vec![true, true]).unwrap()
    }

    #[test]
    fn product_states_carry_no_mutual_information() {
        let rho = DensityOperator::product(&[
            &DensityOperator::from_classical(&[0.3, 0.7]).unwrap(),
            &DensityOperator::maximally_mixed(3),
        ]);
        let m = MultipartiteState::quantum(rho);
        let i = mutual_information(&m, &[0], &[1]).unwrap();
        assert!(i.abs() <= 1e-10);
    }

    #[test]
    fn epr_average_state_entropies() {
        let m = epr_average();
        assert!((subsystem_entropy(&m, &[0, 1]).unwrap() - 1.0).abs() <= 1e-12);
        assert!((subsystem_entropy(&m, &[0]).unwrap() - 1.0).abs() <= 1e-12);
        assert!((subsystem_entropy(&m, &[1]).unwrap() - 1.0).abs() <= 1e-12);
        assert!(conditional_entropy(&m, &[0], &[1]).unwrap().abs() <= 1e-12);
        assert!((mutual_information(&m, &[0], &[1]).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn overlapping_sets_are_rejected() {
        let m = epr_average();
        assert!(matches!(
            mutual_information(&m, &[0], &[0]),
            Err(Error::OverlappingSets { .. })
        ));
        assert!(matches!(
            conditional_mutual_information(&m, &[0], &[1], &[1]),
            Err(Error::OverlappingSets { .. })
        ));
        assert!(matches!(
            subsystem_entropy(&m, &[2]),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn pure_bipartite_marginals_share_entropy() {
        // |ψ⟩ = √0.3|00⟩ + √0.7|11⟩: marginal entropies both h(0.3).
        let amp = [0.3_f64.sqrt(), 0.0, 0.0, 0.7_f64.sqrt()].map(|x| Complex64::new(x, 0.0));
        let rho = DensityOperator::from_pure(&amp)
            .unwrap()
            .with_factor_dims(&[2, 2])
            .unwrap();
        let m = MultipartiteState::quantum(rho);
        let ha = subsystem_entropy(&m, &[0]).unwrap();
        let hb = subsystem_entropy(&m, &[1]).unwrap();
        let h_joint = subsystem_entropy(&m, &[0, 1]).unwrap();
        assert!((ha - hb).abs() <= 1e-10);
        assert!(h_joint.abs() <= 1e-10);
        assert!((ha - crate::binary_entropy(0.3).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn empty_set_has_zero_entropy() {
        let m = epr_average();
        assert_eq!(subsystem_entropy(&m, &[]).unwrap(), 0.0);
        // I(J ∧ ∅) = 0.
        assert!(mutual_information(&m, &[0], &[]).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn cmi_reduces_to_mi_with_empty_conditioner() {
        let g = qla_core::CMatrix::from_fn(4, 4, |r, c| {
            Complex64::new(((r * 7 + c * 3) % 5) as f64 - 2.0, (r as f64 - c as f64) * 0.2)
        });
        let w = HermitianMatrix::from_symmetrized(&g * &g.adjoint());
        let rho = DensityOperator::new(w.scaled(1.0 / w.trace()))
            .unwrap()
            .with_factor_dims(&[2, 2])
            .unwrap();
        let m = MultipartiteState::quantum(rho);
        let a = conditional_mutual_information(&m, &[0], &[1], &[]).unwrap();
        let b = mutual_information(&m, &[0], &[1]).unwrap();
        assert!((a - b).abs() <= 1e-12);
    }
}
