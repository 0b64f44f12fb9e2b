//! The blow-up operator `Γ^l`: least common support of a projector's images
//! under all quantum operations confined to `l` tensor positions.
//!
//! For a projector `Π` on `H_1 ⊗ … ⊗ H_n`, `Γ^l Π` is the support of
//! `{A_(I) Π A_(I)† : |I| = l, A ∈ 𝒜^{⊗I}, A†A ≤ 𝟙}`.  Since every local
//! operator is a combination of matrix units, the span is obtained
//! concretely: slice each basis vector of `im Π` along the positions in
//! `I`, and tensor every `I`-coordinate basis vector with every slice.
//! Iterating the single-step operator `Γ` reproduces `Γ^l`, the chain
//! `Π ≤ ΓΠ ≤ Γ²Π ≤ …` is monotone, and the trace grows at most by a
//! factor `(q·n)^l` with `q = (max_i dim H_i)²`.

use num_complex::Complex64;
use qla_core::{extend_orthonormal, CMatrix, HermitianMatrix, RANK_TOL};

use crate::projector::TypicalProjector;
use crate::{bad_argument, too_large, Error};

/// Largest ambient dimension accepted for a dense blow-up.
const MAX_BLOWUP_DIM: usize = 1024;

/// Budget on (number of position subsets) × (local dimension squared).
const MAX_BLOWUP_WORK: u128 = 262_144;

/// Computes `Γ^l Π` for a dense projector `Π` on the tensor product with the
/// given factor dimensions.  `l = 0` returns `Π` unchanged; `l ≥ n` blows up
/// to the full identity's support of the reachable set (subsets of size `n`).
pub fn blow_up(
    pi: &HermitianMatrix,
    l: usize,
    factor_dims: &[usize],
) -> Result<HermitianMatrix, Error> {
    if factor_dims.is_empty() || factor_dims.iter().any(|&d| d == 0) {
        return Err(bad_argument("factor dimensions must be positive"));
    }
    let total: usize = factor_dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&t| t <= MAX_BLOWUP_DIM)
        .ok_or_else(|| too_large("blow-up ambient dimension"))?;
    if pi.dim() != total {
        return Err(bad_argument(format!(
            "projector dimension {} does not match the factor product {}",
            pi.dim(),
            total
        )));
    }
    if l == 0 {
        return Ok(pi.clone());
    }
    let n = factor_dims.len();
    let l_eff = l.min(n);

    // Enumerate the subsets up front to enforce the work budget.
    let subsets = combinations(n, l_eff);
    let local_dim_sq: u128 = subsets
        .first()
        .map(|i| {
            i.iter()
                .map(|&p| factor_dims[p] as u128)
                .product::<u128>()
                .pow(2)
        })
        .unwrap_or(1);
    if subsets.len() as u128 * local_dim_sq > MAX_BLOWUP_WORK {
        return Err(too_large(format!(
            "blow-up over {} subsets with local dimension² {}",
            subsets.len(),
            local_dim_sq
        )));
    }

    // Orthonormal basis of im Π, validating that Π is a projector.
    let spectrum = qla_core::eig_hermitian(pi)?;
    let mut image: Vec<Vec<Complex64>> = Vec::new();
    for (k, &x) in spectrum.eigenvalues().iter().enumerate() {
        if !(-1e-7..=1.0 + 1e-7).contains(&x) || (x > 0.1 && x < 0.9) {
            return Err(bad_argument(format!(
                "blow-up input must be a projector; eigenvalue {x} found"
            )));
        }
        if x > 0.5 {
            image.push(spectrum.eigenvector(k));
        }
    }
    if image.is_empty() {
        return Ok(HermitianMatrix::zeros(total));
    }

    let mut basis_cols: Vec<Vec<Complex64>> = Vec::new();
    for subset in &subsets {
        let strides = index_split(factor_dims, subset);
        let dim_i: usize = subset.iter().map(|&p| factor_dims[p]).product();
        let dim_rest = total / dim_i;

        // Slice every image vector along the subset coordinates and
        // orthonormalize the slice space.
        let mut slices: Vec<Vec<Complex64>> = Vec::with_capacity(image.len() * dim_i);
        for v in &image {
            for u in 0..dim_i {
                let mut slice = vec![Complex64::new(0.0, 0.0); dim_rest];
                for (w, entry) in slice.iter_mut().enumerate() {
                    *entry = v[strides.combine(u, w)];
                }
                if slice.iter().any(|z| z.norm_sqr() > RANK_TOL * RANK_TOL) {
                    slices.push(slice);
                }
            }
        }
        if slices.is_empty() {
            continue;
        }
        let slice_basis =
            qla_core::orthonormalize_columns(&CMatrix::from_columns(&slices), RANK_TOL);

        // Candidate vectors: every subset-coordinate basis vector tensored
        // with every orthonormal slice.
        let mut candidates: Vec<Vec<Complex64>> =
            Vec::with_capacity(dim_i * slice_basis.cols());
        for u in 0..dim_i {
            for s in 0..slice_basis.cols() {
                let mut vec = vec![Complex64::new(0.0, 0.0); total];
                for w in 0..dim_rest {
                    vec[strides.combine(u, w)] = slice_basis.get(w, s);
                }
                candidates.push(vec);
            }
        }
        let current = if basis_cols.is_empty() {
            CMatrix::zeros(total, 0)
        } else {
            CMatrix::from_columns(&basis_cols)
        };
        let added = extend_orthonormal(&current, &CMatrix::from_columns(&candidates), RANK_TOL);
        for j in 0..added.cols() {
            basis_cols.push(added.column(j));
        }
    }

    if basis_cols.is_empty() {
        return Ok(HermitianMatrix::zeros(total));
    }
    let basis = CMatrix::from_columns(&basis_cols);
    Ok(HermitianMatrix::from_symmetrized(
        basis.matmul(&basis.adjoint()),
    ))
}

/// Blow-up of a symbolic projector: materializes it densely first.
pub fn blow_up_symbolic(pi: &TypicalProjector, l: usize) -> Result<HermitianMatrix, Error> {
    let dense = pi.materialize()?;
    let dims = vec![pi.dim(); pi.n()];
    blow_up(&dense, l, &dims)
}

/// Precomputed strides mapping (subset multi-index, complement multi-index)
/// to a flat tensor index.
struct IndexSplit {
    subset_strides: Vec<(usize, usize)>, // (global stride, local dim) per subset position
    rest_strides: Vec<(usize, usize)>,
}

impl IndexSplit {
    fn combine(&self, u: usize, w: usize) -> usize {
        let mut idx = 0;
        let mut uu = u;
        for &(stride, d) in self.subset_strides.iter().rev() {
            idx += (uu % d) * stride;
            uu /= d;
        }
        let mut ww = w;
        for &(stride, d) in self.rest_strides.iter().rev() {
            idx += (ww % d) * stride;
            ww /= d;
        }
        idx
    }
}

fn index_split(factor_dims: &[usize], subset: &[usize]) -> IndexSplit {
    let n = factor_dims.len();
    let mut strides = vec![1usize; n];
    for i in (0..n - 1).rev() {
        strides[i] = strides[i + 1] * factor_dims[i + 1];
    }
    let in_subset = |i: usize| subset.contains(&i);
    IndexSplit {
        subset_strides: (0..n)
            .filter(|&i| in_subset(i))
            .map(|i| (strides[i], factor_dims[i]))
            .collect(),
        rest_strides: (0..n)
            .filter(|&i| !in_subset(i))
            .map(|i| (strides[i], factor_dims[i]))
            .collect(),
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qla_core::kron_vec;

    fn basis_vec(dim: usize, j: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[j] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn single_product_projector_blows_up_by_local_replacements() {
        // Π = |00⟩⟨00| on two qubits: ΓΠ spans |00⟩, |10⟩, |01⟩ → rank 3.
        let v00 = kron_vec(&[&basis_vec(2, 0), &basis_vec(2, 0)]);
        let pi = HermitianMatrix::from_outer(&v00);
        let blown = blow_up(&pi, 1, &[2, 2]).unwrap();
        assert!((blown.trace() - 3.0).abs() < 1e-9);
        // Γ²Π reaches everything.
        let full = blow_up(&pi, 2, &[2, 2]).unwrap();
        assert!((full.trace() - 4.0).abs() < 1e-9);
        // Π ≤ ΓΠ: the original vector stays inside the support.
        let kept = blown.matrix().matvec(&v00);
        assert!((qla_core::vnorm(&kept) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_steps_return_the_projector_unchanged() {
        let v = kron_vec(&[&basis_vec(2, 1), &basis_vec(2, 0)]);
        let pi = HermitianMatrix::from_outer(&v);
        let same = blow_up(&pi, 0, &[2, 2]).unwrap();
        assert!(same.max_abs_diff(&pi) < 1e-12);
    }

    #[test]
    fn zero_projector_stays_zero() {
        let pi = HermitianMatrix::zeros(4);
        let blown = blow_up(&pi, 1, &[2, 2]).unwrap();
        assert!(blown.trace().abs() < 1e-12);
    }

    #[test]
    fn non_projectors_are_rejected() {
        let m = HermitianMatrix::from_diag(&[0.5, 0.0, 0.0, 0.0]);
        assert!(matches!(
            blow_up(&m, 1, &[2, 2]),
            Err(Error::BadArgument { .. })
        ));
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let pi = HermitianMatrix::identity(4);
        assert!(blow_up(&pi, 1, &[2, 3]).is_err());
    }
}
