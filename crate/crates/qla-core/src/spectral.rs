//! Scalar functions applied eigenvalue-wise in the eigenbasis.

use crate::hermitian::{eig_hermitian, HermitianMatrix};
use crate::{Error, RANK_TOL};

/// Apply a scalar function f to a Hermitian matrix through its spectrum:
/// f(M) = V·diag(f(λ))·V†.
///
/// Kernel convention: if f is undefined (non-finite) at an eigenvalue with
/// |λ| ≤ [`RANK_TOL`], the result on that direction is taken to be 0. This
/// implements 0·log 0 := 0 for entropy-style functions and makes √ robust
/// against −1e−12 round-off eigenvalues of PSD matrices. A non-finite value
/// at a nonzero eigenvalue is a hard [`Error::DomainError`].
pub fn spectral_function(
    m: &HermitianMatrix,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianMatrix, Error> {
    let spectrum = eig_hermitian(m)?;
    let mut values = Vec::with_capacity(spectrum.dim());
    for &lambda in spectrum.eigenvalues() {
        let y = f(lambda);
        if y.is_finite() {
            values.push(y);
        } else if lambda.abs() <= RANK_TOL {
            values.push(0.0);
        } else {
            return Err(Error::DomainError { eigenvalue: lambda });
        }
    }
    Ok(spectrum.recombine(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::CMatrix;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_psd(dim: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
        let g = CMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        });
        HermitianMatrix::from_symmetrized(g.matmul(&g.adjoint()))
    }

    #[test]
    fn sqrt_of_diagonal_squares() {
        let m = HermitianMatrix::from_diag(&[4.0, 9.0]);
        let root = spectral_function(&m, f64::sqrt).unwrap();
        assert!(root.max_abs_diff(&HermitianMatrix::from_diag(&[2.0, 3.0])) <= 1e-12);
    }

    #[test]
    fn sqrt_squared_recovers_random_psd_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = random_psd(4, &mut rng);
            let root = spectral_function(&x, f64::sqrt).unwrap();
            let squared = HermitianMatrix::from_symmetrized(root.matrix().matmul(root.matrix()));
            assert!(squared.max_abs_diff(&x) <= 1e-9);
        }
    }

    #[test]
    fn log2_of_half_identity_is_minus_identity() {
        let m = HermitianMatrix::from_diag(&[0.5, 0.5]);
        let log = spectral_function(&m, f64::log2).unwrap();
        assert!(log.max_abs_diff(&HermitianMatrix::from_diag(&[-1.0, -1.0])) <= 1e-12);
    }

    #[test]
    fn kernel_directions_map_to_zero() {
        // x·log₂x at λ = 0 is NaN; the kernel convention sends it to 0.
        let rho = HermitianMatrix::from_diag(&[1.0, 0.0]);
        let xlogx = spectral_function(&rho, |x| x * x.log2()).unwrap();
        assert!(xlogx.max_abs_diff(&HermitianMatrix::zeros(2)) <= 1e-12);
        // Plain log₂ hits −∞ on the kernel; same convention applies.
        let log = spectral_function(&rho, f64::log2).unwrap();
        assert!(log.max_abs_diff(&HermitianMatrix::zeros(2)) <= 1e-12);
    }

    #[test]
    fn undefined_at_nonzero_eigenvalue_is_a_domain_error() {
        let m = HermitianMatrix::from_diag(&[1.0, -1.0]);
        match spectral_function(&m, f64::log2) {
            Err(Error::DomainError { eigenvalue }) => assert!((eigenvalue + 1.0).abs() <= 1e-12),
            other => panic!("expected DomainError, got {other:?}"),
        }
    }
}
