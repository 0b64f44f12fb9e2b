//! Quantum relative entropy with explicit infinity semantics, and its
//! classical scalar specialization.

use std::fmt;

use qla_core::RANK_TOL;
use quantum_objects::DensityOperator;

use crate::Error;

/// Eigenvectors of ρ carrying at least this much weight must lie in the
/// support of σ for D(ρ‖σ) to be finite.
const SUPPORT_WEIGHT_TOL: f64 = 1e-9;
/// Admissible projection residual of such an eigenvector outside supp σ.
const SUPPORT_RESIDUAL_TOL: f64 = 1e-7;

/// A divergence value: finite bits, or the support-violation infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Divergence {
    Finite(f64),
    Infinite,
}

impl Divergence {
    pub fn is_finite(&self) -> bool {
        matches!(self, Divergence::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<f64> {
        match self {
            Divergence::Finite(x) => Some(*x),
            Divergence::Infinite => None,
        }
    }

    /// The finite value; panics on infinity (use in contexts where
    /// finiteness was already established).
    pub fn expect_finite(&self) -> f64 {
        self.finite().expect("divergence is infinite")
    }

    /// Whether the divergence is ≥ `x` (infinity dominates every float).
    pub fn at_least(&self, x: f64) -> bool {
        match self {
            Divergence::Finite(v) => *v >= x,
            Divergence::Infinite => true,
        }
    }
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divergence::Finite(x) => write!(f, "{x}"),
            Divergence::Infinite => write!(f, "inf"),
        }
    }
}

/// Relative entropy D(ρ‖σ) = Tr(ρ(log₂ ρ − log₂ σ)), infinite when the
/// support of ρ is not contained in the support of σ.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<Divergence, Error> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim_mismatch(format!(
            "relative entropy between dims {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let r = rho.eig();
    let s = sigma.eig();
    let support: Vec<usize> = (0..s.dim())
        .filter(|&j| s.eigenvalues()[j] > RANK_TOL)
        .collect();

    // Overlaps |⟨w_j|v_i⟩|² between σ's and ρ's eigenvectors.
    let dim = rho.dim();
    let mut overlap = vec![vec![0.0_f64; s.dim()]; r.dim()];
    for i in 0..dim {
        let v = r.eigenvector(i);
        for j in 0..dim {
            let w = s.eigenvector(j);
            overlap[i][j] = qla_core::vdot(&w, &v).norm_sqr();
        }
    }

    // Support check: heavy eigenvectors of ρ must project into supp σ.
    for i in 0..dim {
        if r.eigenvalues()[i] <= SUPPORT_WEIGHT_TOL {
            continue;
        }
        let inside: f64 = support.iter().map(|&j| overlap[i][j]).sum();
        let residual = (1.0 - inside).max(0.0).sqrt();
        if residual > SUPPORT_RESIDUAL_TOL {
            return Ok(Divergence::Infinite);
        }
    }

    let mut value = 0.0;
    for i in 0..dim {
        let lam = r.eigenvalues()[i];
        if lam <= 0.0 {
            continue;
        }
        value += lam * lam.log2();
        for &j in &support {
            value -= lam * overlap[i][j] * s.eigenvalues()[j].log2();
        }
    }
    Ok(Divergence::Finite(value.max(0.0)))
}

/// Classical Kullback–Leibler divergence D(p‖q) in bits over matching
/// index sets; infinite when p puts weight where q has none.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<Divergence, Error> {
    if p.len() != q.len() {
        return Err(Error::size_mismatch(format!(
            "KL divergence between lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    let mut value = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return Ok(Divergence::Infinite);
        }
        value += pi * (pi / qi).log2();
    }
    Ok(Divergence::Finite(value.max(0.0)))
}
