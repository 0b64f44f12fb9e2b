//! Density operators: positive unit-trace Hermitian matrices with an
//! optional tensor-factor structure.

use crate::Error;
use num_complex::Complex64;
use qla_core::{
    eig_hermitian, tensor_product, vnorm, HermitianMatrix, Spectrum, HERM_TOL, RANK_TOL,
};

/// A quantum state: PSD Hermitian matrix with unit trace.
///
/// `factor_dims` records the tensor structure the state lives on; it
/// defaults to the single factor `[dim]` and multiplies out to `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: HermitianMatrix,
    factor_dims: Vec<usize>,
}

impl DensityOperator {
    /// Validate positivity (min eigenvalue ≥ −1e-9) and unit trace
    /// (within 1e-9).
    pub fn new(matrix: HermitianMatrix) -> Result<Self, Error> {
        let trace = matrix.trace();
        if (trace - 1.0).abs() > HERM_TOL {
            return Err(Error::NotDensity {
                reason: format!("trace {trace:.12} differs from 1 beyond 1e-9"),
            });
        }
        let spectrum = eig_hermitian(&matrix)?;
        let min_eigenvalue = spectrum.eigenvalues().last().copied().unwrap_or(0.0);
        if min_eigenvalue < -HERM_TOL {
            return Err(Error::NotDensity {
                reason: format!("minimum eigenvalue {min_eigenvalue:.3e} below −1e-9"),
            });
        }
        let dim = matrix.dim();
        Ok(DensityOperator {
            matrix,
            factor_dims: vec![dim],
        })
    }

    /// Wrap a matrix that is a valid state by construction (channel outputs,
    /// tensor products of states, spectral recombinations with a
    /// probability vector). Only the trace is re-checked (debug builds
    /// assert it); positivity is the caller's guarantee.
    pub fn from_valid(matrix: HermitianMatrix, factor_dims: Vec<usize>) -> Self {
        debug_assert!(
            (matrix.trace() - 1.0).abs() <= 1e-7,
            "from_valid trace {:.12}",
            matrix.trace()
        );
        debug_assert_eq!(factor_dims.iter().product::<usize>(), matrix.dim());
        DensityOperator {
            matrix,
            factor_dims,
        }
    }

    /// Record a tensor-factor structure; the product must equal the
    /// dimension.
    pub fn with_factor_dims(mut self, factor_dims: &[usize]) -> Result<Self, Error> {
        if factor_dims.iter().product::<usize>() != self.dim() || factor_dims.is_empty() {
            return Err(Error::dim_mismatch(format!(
                "factor dims {factor_dims:?} do not multiply to {}",
                self.dim()
            )));
        }
        self.factor_dims = factor_dims.to_vec();
        Ok(self)
    }

    /// Rank-1 state |v⟩⟨v| from a (nonzero) vector, normalized internally.
    pub fn from_pure(v: &[Complex64]) -> Result<Self, Error> {
        let norm = vnorm(v);
        if norm < 1e-12 {
            return Err(Error::bad_shape("pure state from (near-)zero vector"));
        }
        let unit: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
        let dim = unit.len();
        Ok(DensityOperator {
            matrix: HermitianMatrix::from_outer(&unit),
            factor_dims: vec![dim],
        })
    }

    /// Diagonal (classical) state from a probability vector.
    pub fn from_classical(probs: &[f64]) -> Result<Self, Error> {
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > HERM_TOL || probs.iter().any(|&p| p < -1e-12) {
            return Err(Error::NotDensity {
                reason: format!("classical weights sum to {sum:.12} or go negative"),
            });
        }
        Ok(DensityOperator {
            matrix: HermitianMatrix::from_diag(probs),
            factor_dims: vec![probs.len()],
        })
    }

    /// The state 𝟙/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        assert!(dim >= 1, "maximally_mixed needs dim ≥ 1");
        DensityOperator {
            matrix: HermitianMatrix::identity(dim).scaled(1.0 / dim as f64),
            factor_dims: vec![dim],
        }
    }

    /// Tensor product of states; factor structure is the concatenation.
    pub fn product(factors: &[&DensityOperator]) -> Self {
        assert!(!factors.is_empty(), "product of zero states");
        let mut matrix = factors[0].matrix.clone();
        let mut dims = factors[0].factor_dims.clone();
        for f in &factors[1..] {
            matrix = tensor_product(&matrix, &f.matrix);
            dims.extend_from_slice(&f.factor_dims);
        }
        DensityOperator {
            matrix,
            factor_dims: dims,
        }
    }

    /// n-fold tensor power ρ⊗…⊗ρ.
    pub fn power(&self, n: usize) -> Self {
        assert!(n >= 1, "tensor power needs n ≥ 1");
        let refs: Vec<&DensityOperator> = std::iter::repeat(self).take(n).collect();
        DensityOperator::product(&refs)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Spectral decomposition (eigenvalues descending).
    pub fn eig(&self) -> Spectrum {
        eig_hermitian(&self.matrix).expect("state matrices are Hermitian")
    }

    /// Tr(ρ²) ∈ (0, 1]; equals 1 exactly on pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix)
    }

    /// Rank-1 within tolerance 1e-8 on 1 − Tr(ρ²).
    pub fn is_pure(&self) -> bool {
        1.0 - self.purity() <= 1e-8
    }

    /// Number of eigenvalues above the rank cutoff.
    pub fn rank(&self) -> usize {
        self.eig()
            .eigenvalues()
            .iter()
            .filter(|&&l| l > RANK_TOL)
            .count()
    }

    /// Expectation Tr(ρ·X) of a Hermitian observable.
    pub fn expectation(&self, x: &HermitianMatrix) -> f64 {
        self.matrix.trace_product(x)
    }
}
