//! POVMs, sub-normalized POVMs, and the interior/total measurement
//! channels of the tender-measurement lemma.

use crate::channel::KrausChannel;
use crate::density::DensityOperator;
use crate::Error;
use qla_core::{
    eig_hermitian, spectral_function, CMatrix, HermitianMatrix, COMPLETENESS_TOL, HERM_TOL,
    RANK_TOL,
};

/// A positive resolution of the identity: elements Dᵦ ⪰ 0 with Σᵦ Dᵦ = 𝟙
/// within 1e-8.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<HermitianMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<HermitianMatrix>) -> Result<Self, Error> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm {
                reason: "POVM needs at least one element".into(),
            })?;
        let dim = first.dim();
        if elements.iter().any(|e| e.dim() != dim) {
            return Err(Error::InvalidPovm {
                reason: "POVM elements must share one dimension".into(),
            });
        }
        let mut sum = HermitianMatrix::zeros(dim);
        for (b, e) in elements.iter().enumerate() {
            let min = eig_hermitian(e)?
                .eigenvalues()
                .last()
                .copied()
                .unwrap_or(0.0);
            if min < -HERM_TOL {
                return Err(Error::InvalidPovm {
                    reason: format!("element {b} has negative eigenvalue {min:.3e}"),
                });
            }
            sum = &sum + e;
        }
        let residual = sum.max_abs_diff(&HermitianMatrix::identity(dim));
        if residual > COMPLETENESS_TOL {
            return Err(Error::InvalidPovm {
                reason: format!("elements sum to 𝟙 only within {residual:.3e}"),
            });
        }
        Ok(Povm { elements })
    }

    /// The projective measurement in the computational basis.
    pub fn computational(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|i| {
                let mut diag = vec![0.0; dim];
                diag[i] = 1.0;
                HermitianMatrix::from_diag(&diag)
            })
            .collect();
        Povm { elements }
    }

    pub fn elements(&self) -> &[HermitianMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// Outcome distribution Tr(ρ·Dᵦ) on a state.
    pub fn outcome_distribution(&self, rho: &DensityOperator) -> Result<Vec<f64>, Error> {
        if rho.dim() != self.dim() {
            return Err(Error::dim_mismatch(format!(
                "POVM dim {} vs state dim {}",
                self.dim(),
                rho.dim()
            )));
        }
        Ok(self
            .elements
            .iter()
            .map(|e| rho.matrix().trace_product(e).max(0.0))
            .collect())
    }
}

/// A sub-normalized POVM: elements Dₘ ⪰ 0 with Σₘ Dₘ ≤ 𝟙, stored in
/// factored form Dₘ = FₘFₘ† so that large-dimension decoders with low-rank
/// elements stay cheap. Completing with the remainder 𝟙 − ΣDₘ under the
/// reserved final index yields a [`Povm`].
#[derive(Debug, Clone, PartialEq)]
pub struct SubPovm {
    dim: usize,
    factors: Vec<CMatrix>,
}

impl SubPovm {
    /// Build from factors {Fₘ}; element m is FₘFₘ† (automatically PSD).
    /// Validates Σₘ FₘFₘ† ≤ 𝟙 through the Gram spectrum of the stacked
    /// columns, which never materializes a dim×dim operator.
    pub fn from_factors(dim: usize, factors: Vec<CMatrix>) -> Result<Self, Error> {
        if factors.iter().any(|f| f.rows() != dim) {
            return Err(Error::InvalidPovm {
                reason: "factor row count must equal the dimension".into(),
            });
        }
        let total_cols: usize = factors.iter().map(|f| f.cols()).sum();
        if total_cols > 0 {
            // Σₘ FₘFₘ† = W·W† for W = [F₁ F₂ …]; its nonzero spectrum equals
            // that of the small Gram matrix W†W.
            let mut w = CMatrix::zeros(dim, total_cols);
            let mut offset = 0;
            for f in &factors {
                for j in 0..f.cols() {
                    for i in 0..dim {
                        w.set(i, offset + j, f.get(i, j));
                    }
                }
                offset += f.cols();
            }
            let gram = HermitianMatrix::from_symmetrized(w.adjoint().matmul(&w));
            let max = eig_hermitian(&gram)?
                .eigenvalues()
                .first()
                .copied()
                .unwrap_or(0.0);
            if max > 1.0 + COMPLETENESS_TOL {
                return Err(Error::InvalidPovm {
                    reason: format!("sub-POVM sum exceeds 𝟙: max eigenvalue {max:.12}"),
                });
            }
        }
        Ok(SubPovm { dim, factors })
    }

    /// Build from dense elements by factoring each as V·√Λ over its
    /// positive spectrum.
    pub fn from_elements(elements: &[HermitianMatrix]) -> Result<Self, Error> {
        let first = elements.first().ok_or_else(|| Error::InvalidPovm {
            reason: "sub-POVM needs at least one element".into(),
        })?;
        let dim = first.dim();
        if elements.iter().any(|e| e.dim() != dim) {
            return Err(Error::InvalidPovm {
                reason: "sub-POVM elements must share one dimension".into(),
            });
        }
        let mut factors = Vec::with_capacity(elements.len());
        for (m, e) in elements.iter().enumerate() {
            let spec = eig_hermitian(e)?;
            let min = spec.eigenvalues().last().copied().unwrap_or(0.0);
            if min < -HERM_TOL {
                return Err(Error::InvalidPovm {
                    reason: format!("element {m} has negative eigenvalue {min:.3e}"),
                });
            }
            let kept: Vec<usize> = (0..spec.dim())
                .filter(|&j| spec.eigenvalues()[j] > RANK_TOL)
                .collect();
            let mut f = CMatrix::zeros(dim, kept.len());
            for (col, &j) in kept.iter().enumerate() {
                let scale = spec.eigenvalues()[j].sqrt();
                for i in 0..dim {
                    f.set(i, col, spec.eigenvectors().get(i, j) * scale);
                }
            }
            factors.push(f);
        }
        SubPovm::from_factors(dim, factors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factor Fₘ of element m = FₘFₘ†.
    pub fn factor(&self, m: usize) -> &CMatrix {
        &self.factors[m]
    }

    /// Materialize element m densely.
    pub fn element(&self, m: usize) -> HermitianMatrix {
        let f = &self.factors[m];
        HermitianMatrix::from_symmetrized(f.matmul(&f.adjoint()))
    }

    /// Tr(ρ·Dₘ) = Tr(Fₘ†ρFₘ), evaluated column by column.
    pub fn outcome_probability(&self, m: usize, rho: &DensityOperator) -> f64 {
        let f = &self.factors[m];
        let mut total = 0.0;
        for j in 0..f.cols() {
            let col = f.column(j);
            let image = rho.matrix().matrix().matvec(&col);
            total += col
                .iter()
                .zip(&image)
                .map(|(a, b)| (a.conj() * b).re)
                .sum::<f64>();
        }
        total
    }

    /// Dense Σₘ Dₘ (use at small dimension only).
    pub fn total_element(&self) -> HermitianMatrix {
        let mut sum = HermitianMatrix::zeros(self.dim);
        for m in 0..self.len() {
            sum = &sum + &self.element(m);
        }
        sum
    }

    /// Complete to a POVM by appending the remainder 𝟙 − ΣₘDₘ under the
    /// reserved final index `self.len()`.
    pub fn complete(&self) -> Result<Povm, Error> {
        let mut elements: Vec<HermitianMatrix> = (0..self.len()).map(|m| self.element(m)).collect();
        let remainder = &HermitianMatrix::identity(self.dim) - &self.total_element();
        elements.push(remainder);
        Povm::new(elements)
    }
}

/// The interior measurement channel D*_int: ρ ↦ Σᵦ √Dᵦ ρ √Dᵦ — measurement
/// result forgotten, state kept.
pub fn povm_interior(povm: &Povm) -> Result<KrausChannel, Error> {
    let mut ops = Vec::with_capacity(povm.len());
    for e in povm.elements() {
        let root = spectral_function(e, f64::sqrt)?;
        ops.push(root.into_matrix());
    }
    Ok(KrausChannel::new(ops)?)
}

/// The total measurement channel D*_tot: ρ ↦ Σᵦ [b] ⊗ √Dᵦ ρ √Dᵦ — the
/// classical outcome is kept in a register prepended as the *first* tensor
/// factor, so outputs carry factor_dims (|B|, dim).
pub fn povm_total(povm: &Povm) -> Result<KrausChannel, Error> {
    let (b_count, dim) = (povm.len(), povm.dim());
    let mut ops = Vec::with_capacity(b_count);
    for (b, e) in povm.elements().iter().enumerate() {
        let root = spectral_function(e, f64::sqrt)?;
        // K_b = |b⟩ ⊗ √D_b : dim → |B|·dim
        let mut k = CMatrix::zeros(b_count * dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                k.set(b * dim + r, c, root.get(r, c));
            }
        }
        ops.push(k);
    }
    Ok(KrausChannel::new(ops)?)
}

/// Apply the total measurement and tag the output with its (|B|, dim)
/// factor structure.
pub fn apply_total(povm: &Povm, rho: &DensityOperator) -> Result<DensityOperator, Error> {
    let ch = povm_total(povm)?;
    let out = ch.apply(rho)?;
    let dims = vec![povm.len(), povm.dim()];
    out.with_factor_dims(&dims)
}
