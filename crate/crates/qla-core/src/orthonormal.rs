//! Column orthonormalization by modified Gram–Schmidt with
//! re-orthogonalization ("twice is enough").

use crate::cmatrix::{vdot, vnorm, CMatrix};
use num_complex::Complex64;

/// Orthogonalize `v` in place against each column of `basis`
/// (which must be orthonormal).
fn project_out(basis: &[Vec<Complex64>], v: &mut [Complex64]) {
    for u in basis {
        let coeff = vdot(u, v);
        for (x, b) in v.iter_mut().zip(u) {
            *x -= coeff * b;
        }
    }
}

/// Orthonormal basis for the column span of `m`.
///
/// Columns are processed left to right; a column whose residual after
/// projection is ≤ `tol`·(‖column‖ + ε) is treated as linearly dependent
/// and dropped, so the output has one column per independent input
/// direction and satisfies V†V = 𝟙 to machine precision.
pub fn orthonormalize_columns(m: &CMatrix, tol: f64) -> CMatrix {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..m.cols() {
        let col = m.column(j);
        let original_norm = vnorm(&col);
        let mut v = col;
        project_out(&basis, &mut v);
        project_out(&basis, &mut v); // re-orthogonalize
        let norm = vnorm(&v);
        if norm > tol * (original_norm + 1e-300) {
            let inv = 1.0 / norm;
            for x in v.iter_mut() {
                *x *= inv;
            }
            basis.push(v);
        }
    }
    if basis.is_empty() {
        CMatrix::zeros(m.rows(), 0)
    } else {
        CMatrix::from_columns(&basis)
    }
}

/// Orthonormalize the columns of `new_cols` against an existing orthonormal
/// `basis` and against each other, returning only the accepted new columns.
///
/// Appending the result to `basis` keeps the whole family orthonormal; the
/// drop rule is the same relative `tol` as [`orthonormalize_columns`].
pub fn extend_orthonormal(basis: &CMatrix, new_cols: &CMatrix, tol: f64) -> CMatrix {
    assert_eq!(
        basis.rows(),
        new_cols.rows(),
        "extend_orthonormal row mismatch"
    );
    let existing: Vec<Vec<Complex64>> = (0..basis.cols()).map(|j| basis.column(j)).collect();
    let mut accepted: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..new_cols.cols() {
        let col = new_cols.column(j);
        let original_norm = vnorm(&col);
        let mut v = col;
        for pass in 0..2 {
            let _ = pass;
            project_out(&existing, &mut v);
            project_out(&accepted, &mut v);
        }
        let norm = vnorm(&v);
        if norm > tol * (original_norm + 1e-300) {
            let inv = 1.0 / norm;
            for x in v.iter_mut() {
                *x *= inv;
            }
            accepted.push(v);
        }
    }
    if accepted.is_empty() {
        CMatrix::zeros(basis.rows(), 0)
    } else {
        CMatrix::from_columns(&accepted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| {
            Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        })
    }

    #[test]
    fn gaussian_columns_orthonormalize_to_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let m = random_matrix(6, 4, &mut rng);
            let q = orthonormalize_columns(&m, 1e-9);
            assert_eq!(q.cols(), 4);
            let gram = q.adjoint().matmul(&q);
            assert!(gram.max_abs_diff(&CMatrix::identity(4)) <= 1e-12);
            // Span containment: every original column reconstructs from Q.
            let proj = q.matmul(&q.adjoint());
            let reconstructed = proj.matmul(&m);
            assert!(reconstructed.max_abs_diff(&m) <= 1e-10);
        }
    }

    #[test]
    fn dependent_columns_are_dropped() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let base = random_matrix(5, 2, &mut rng);
        // Third column = sum of the first two → rank stays 2.
        let m = CMatrix::from_fn(5, 3, |i, j| {
            if j < 2 {
                base.get(i, j)
            } else {
                base.get(i, 0) + base.get(i, 1)
            }
        });
        let q = orthonormalize_columns(&m, 1e-9);
        assert_eq!(q.cols(), 2);
    }

    #[test]
    fn extension_stays_orthonormal_and_skips_spanned_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let basis = orthonormalize_columns(&random_matrix(6, 3, &mut rng), 1e-9);
        let fresh = random_matrix(6, 2, &mut rng);
        let added = extend_orthonormal(&basis, &fresh, 1e-9);
        assert_eq!(added.cols(), 2);
        // Joint family is orthonormal.
        let mut cols: Vec<Vec<Complex64>> = (0..3).map(|j| basis.column(j)).collect();
        for j in 0..added.cols() {
            cols.push(added.column(j));
        }
        let joint = CMatrix::from_columns(&cols);
        let gram = joint.adjoint().matmul(&joint);
        assert!(gram.max_abs_diff(&CMatrix::identity(5)) <= 1e-12);

        // A column already inside the basis span contributes nothing.
        let inside = basis.matmul(&random_matrix(3, 1, &mut rng));
        let none = extend_orthonormal(&basis, &inside, 1e-9);
        assert_eq!(none.cols(), 0);
    }
}
