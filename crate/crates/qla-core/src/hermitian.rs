//! Hermitian matrices and their spectral decompositions.
//!
//! The eigensolver is a cyclic complex Jacobi iteration: each rotation is a
//! unitary plane rotation J chosen to annihilate one off-diagonal entry of
//! A ← J†AJ, with the rotations accumulated into the eigenvector matrix.
//! Jacobi is slower than tridiagonalization-based methods but is
//! self-contained, deterministic, and unconditionally robust on Hermitian
//! input, which is what the property tests and desk-scale workloads here
//! need.

use crate::cmatrix::CMatrix;
use crate::{Error, HERM_TOL};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};
use std::ops::{Add, Sub};

/// A square complex matrix with M = M† enforced exactly.
///
/// Construction symmetrizes the entries, so `matrix()[j][k]` equals the
/// exact complex conjugate of `matrix()[k][j]` and the diagonal is exactly
/// real; downstream arithmetic can rely on this bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HermitianMatrix {
    matrix: CMatrix,
}

impl HermitianMatrix {
    /// Validate Hermitian symmetry within [`HERM_TOL`], then store the exact
    /// symmetrization (M + M†)/2.
    pub fn new(matrix: CMatrix) -> Result<Self, Error> {
        if !matrix.is_square() {
            return Err(Error::dim_mismatch(format!(
                "Hermitian matrix must be square, got {}×{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let residual = matrix.hermiticity_residual();
        if residual > HERM_TOL {
            return Err(Error::NonHermitian {
                residual,
                tol: HERM_TOL,
            });
        }
        Ok(Self::from_symmetrized(matrix))
    }

    /// Symmetrize (M + M†)/2 without a tolerance check.
    ///
    /// For matrices that are Hermitian by construction up to rounding
    /// (sandwiches A·M·A†, sums of outer products, pinchings); the cost is
    /// O(dim²) and the result is exactly Hermitian.
    pub fn from_symmetrized(mut matrix: CMatrix) -> Self {
        assert!(matrix.is_square(), "Hermitian matrix must be square");
        let n = matrix.rows();
        for i in 0..n {
            let d = matrix.get(i, i);
            matrix.set(i, i, Complex64::new(d.re, 0.0));
            for j in (i + 1)..n {
                let avg = (matrix.get(i, j) + matrix.get(j, i).conj()) * 0.5;
                matrix.set(i, j, avg);
                matrix.set(j, i, avg.conj());
            }
        }
        HermitianMatrix { matrix }
    }

    /// Real diagonal matrix.
    pub fn from_diag(diag: &[f64]) -> Self {
        HermitianMatrix {
            matrix: CMatrix::from_real_diag(diag),
        }
    }

    /// n×n identity.
    pub fn identity(n: usize) -> Self {
        HermitianMatrix {
            matrix: CMatrix::identity(n),
        }
    }

    /// n×n zero matrix.
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix {
            matrix: CMatrix::zeros(n, n),
        }
    }

    /// Rank-one projector-style outer product v·v† (Hermitian for any v).
    pub fn from_outer(v: &[Complex64]) -> Self {
        Self::from_symmetrized(CMatrix::from_outer(v, v))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix.get(i, j)
    }

    /// Trace, exactly real because the diagonal is.
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i).re).sum()
    }

    /// Tr(A·B) for Hermitian A, B — real, computed in O(dim²) as
    /// Σᵢⱼ Re(aᵢⱼ · conj(bᵢⱼ)).
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "trace_product dimension mismatch");
        self.matrix
            .data()
            .iter()
            .zip(other.matrix.data())
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    /// Sandwich A·M·A† for a k×dim matrix A; the result is Hermitian by
    /// construction and is re-symmetrized exactly.
    pub fn sandwich(&self, a: &CMatrix) -> HermitianMatrix {
        assert_eq!(a.cols(), self.dim(), "sandwich dimension mismatch");
        let t = a.matmul(&self.matrix);
        HermitianMatrix::from_symmetrized(t.matmul(&a.adjoint()))
    }

    /// self scaled by a real factor.
    pub fn scaled(&self, x: f64) -> HermitianMatrix {
        HermitianMatrix {
            matrix: self.matrix.scaled_re(x),
        }
    }

    /// Largest entry-wise difference to another Hermitian matrix.
    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        // Sum of exactly Hermitian matrices stays exactly Hermitian.
        HermitianMatrix {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let matrix = CMatrix::deserialize(deserializer)?;
        HermitianMatrix::new(matrix).map_err(serde::de::Error::custom)
    }
}

/// Spectral decomposition M = V·diag(λ)·V† with eigenvalues sorted
/// descending and eigenvectors as the corresponding orthonormal columns of V.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl Spectrum {
    /// Eigenvalues, sorted descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvector columns, aligned with `eigenvalues()`.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Copy of the j-th eigenvector.
    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j)
    }

    /// V·diag(λ)·V†, for reconstruction checks.
    pub fn reconstruct(&self) -> CMatrix {
        self.recombine(&self.eigenvalues).into_matrix()
    }

    /// V·diag(values)·V† — apply replacement eigenvalues in the eigenbasis.
    pub fn recombine(&self, values: &[f64]) -> HermitianMatrix {
        assert_eq!(values.len(), self.dim(), "recombine length mismatch");
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled.set(i, j, scaled.get(i, j) * values[j]);
            }
        }
        HermitianMatrix::from_symmetrized(scaled.matmul(&self.eigenvectors.adjoint()))
    }

    /// Spectral projector Σ { vⱼvⱼ† : pred(λⱼ) }.
    ///
    /// The predicate must depend on the eigenvalue only, so the result is a
    /// function of spectral projectors and insensitive to basis choice
    /// within degenerate blocks.
    pub fn projector_where(&self, pred: impl Fn(f64) -> bool) -> HermitianMatrix {
        let indicator: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| if pred(l) { 1.0 } else { 0.0 })
            .collect();
        self.recombine(&indicator)
    }
}

const MAX_SWEEPS: usize = 64;

/// Spectral decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Returns eigenvalues sorted descending with orthonormal eigenvector
/// columns. In debug builds the reconstruction V·diag(λ)·V† is asserted to
/// match the input within 1e-9.
pub fn eig_hermitian(m: &HermitianMatrix) -> Result<Spectrum, Error> {
    let n = m.dim();
    let mut a = m.matrix().clone();
    let mut v = CMatrix::identity(n);

    let scale = a.max_abs();
    if n > 1 && scale > 0.0 {
        // Absolute off-diagonal target; each rotation moves O(scale) weight
        // onto the diagonal and cyclic sweeps converge quadratically.
        let target = scale * 1e-14;
        let mut converged = false;
        let mut last_off = 0.0;
        for _sweep in 0..MAX_SWEEPS {
            let mut off = 0.0_f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(a.get(p, q).norm());
                }
            }
            last_off = off;
            if off <= target {
                converged = true;
                break;
            }
            for p in 0..(n - 1) {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    let mag = apq.norm();
                    if mag <= target * 1e-2 {
                        continue;
                    }
                    // Annihilate (p,q): with w the phase of a_pq, the real
                    // rotation angle solves t² + 2τt − 1 = 0 for
                    // τ = (a_qq − a_pp)/(2|a_pq|); the smaller root is stable.
                    let w = apq / mag;
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let tau = (aqq - app) / (2.0 * mag);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let sw = w * s;
                    let swc = w.conj() * s;

                    // Columns: A ← A·J, with J mixing columns p and q.
                    for i in 0..n {
                        let aip = a.get(i, p);
                        let aiq = a.get(i, q);
                        a.set(i, p, aip * c - aiq * swc);
                        a.set(i, q, aip * sw + aiq * c);
                    }
                    // Rows: A ← J†·A.
                    for j in 0..n {
                        let apj = a.get(p, j);
                        let aqj = a.get(q, j);
                        a.set(p, j, apj * c - aqj * sw);
                        a.set(q, j, apj * swc + aqj * c);
                    }
                    // Eigenvector accumulation: V ← V·J.
                    for i in 0..n {
                        let vip = v.get(i, p);
                        let viq = v.get(i, q);
                        v.set(i, p, vip * c - viq * swc);
                        v.set(i, q, vip * sw + viq * c);
                    }
                    // Pin the analytically known zeros/reals against drift.
                    a.set(p, q, Complex64::new(0.0, 0.0));
                    a.set(q, p, Complex64::new(0.0, 0.0));
                    let dp = a.get(p, p);
                    a.set(p, p, Complex64::new(dp.re, 0.0));
                    let dq = a.get(q, q);
                    a.set(q, q, Complex64::new(dq.re, 0.0));
                }
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off_diagonal: last_off,
            });
        }
    }

    // Sort eigenvalues descending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).re.partial_cmp(&a.get(i, i).re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));

    let spectrum = Spectrum {
        eigenvalues,
        eigenvectors,
    };

    #[cfg(debug_assertions)]
    {
        let residual = spectrum.reconstruct().max_abs_diff(m.matrix());
        debug_assert!(
            residual <= 1e-9,
            "eigendecomposition reconstruction residual {residual:.3e}"
        );
    }

    Ok(spectrum)
}
