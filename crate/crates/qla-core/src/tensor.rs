//! Tensor-product algebra: Kronecker products, partial traces, and
//! matrix-free application of product operators.
//!
//! Index convention: the first tensor factor is the most significant digit
//! of the composite index, matching the Kronecker product A⊗B where the
//! composite row index is i_A·rows(B) + i_B.

use crate::cmatrix::CMatrix;
use crate::hermitian::HermitianMatrix;
use crate::Error;
use num_complex::Complex64;

/// Kronecker product of Hermitian matrices (exactly Hermitian again).
pub fn tensor_product(a: &HermitianMatrix, b: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::from_symmetrized(a.matrix().kron(b.matrix()))
}

/// Kronecker product of a list of factors, left to right; the empty product
/// is the 1×1 identity.
pub fn tensor_all(factors: &[&HermitianMatrix]) -> HermitianMatrix {
    let mut acc = CMatrix::identity(1);
    for f in factors {
        acc = acc.kron(f.matrix());
    }
    HermitianMatrix::from_symmetrized(acc)
}

/// n-fold Kronecker power (n = 0 gives the 1×1 identity).
pub fn tensor_power(a: &HermitianMatrix, n: usize) -> HermitianMatrix {
    let mut acc = CMatrix::identity(1);
    for _ in 0..n {
        acc = acc.kron(a.matrix());
    }
    HermitianMatrix::from_symmetrized(acc)
}

/// Mixed-radix strides for a factor-dimension list: `stride[i]` is the
/// flat-index weight of factor i.
fn strides(factor_dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; factor_dims.len()];
    for i in (0..factor_dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * factor_dims[i + 1];
    }
    s
}

/// Flat offsets of every multi-index over the given dims, weighted by the
/// given strides, enumerated in row-major (last digit fastest) order.
fn enumerate_offsets(dims: &[usize], stride: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let mut offsets = Vec::with_capacity(total);
    let mut digits = vec![0usize; dims.len()];
    for _ in 0..total {
        offsets.push(digits.iter().zip(stride).map(|(d, s)| d * s).sum());
        for pos in (0..dims.len()).rev() {
            digits[pos] += 1;
            if digits[pos] < dims[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
    offsets
}

/// Partial trace over the factors *not* listed in `keep`.
///
/// `factor_dims` gives the tensor structure (product must equal the matrix
/// dimension); `keep` lists the factor indices to retain, in any order —
/// the result is laid out in ascending factor order. An empty `keep`
/// reduces to the 1×1 matrix holding the full trace.
pub fn partial_trace(
    m: &HermitianMatrix,
    factor_dims: &[usize],
    keep: &[usize],
) -> Result<HermitianMatrix, Error> {
    let dim: usize = factor_dims.iter().product();
    if factor_dims.is_empty() || dim != m.dim() {
        return Err(Error::dim_mismatch(format!(
            "factor dims {factor_dims:?} do not multiply to matrix dim {}",
            m.dim()
        )));
    }
    let f = factor_dims.len();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    if kept.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::dim_mismatch(format!("duplicate keep index in {keep:?}")));
    }
    if kept.iter().any(|&k| k >= f) {
        return Err(Error::dim_mismatch(format!(
            "keep index out of range: {keep:?} with {f} factors"
        )));
    }
    let traced: Vec<usize> = (0..f).filter(|i| !kept.contains(i)).collect();
    let stride = strides(factor_dims);

    let kept_dims: Vec<usize> = kept.iter().map(|&i| factor_dims[i]).collect();
    let kept_strides: Vec<usize> = kept.iter().map(|&i| stride[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| factor_dims[i]).collect();
    let traced_strides: Vec<usize> = traced.iter().map(|&i| stride[i]).collect();

    let kept_offsets = enumerate_offsets(&kept_dims, &kept_strides);
    let traced_offsets = enumerate_offsets(&traced_dims, &traced_strides);

    let out_dim = kept_offsets.len();
    let mut out = CMatrix::zeros(out_dim, out_dim);
    for (r, &row_base) in kept_offsets.iter().enumerate() {
        for (c, &col_base) in kept_offsets.iter().enumerate() {
            let mut sum = Complex64::new(0.0, 0.0);
            for &t in &traced_offsets {
                sum += m.get(row_base + t, col_base + t);
            }
            out.set(r, c, sum);
        }
    }
    Ok(HermitianMatrix::from_symmetrized(out))
}

/// Apply a tensor product of factors, ⊗ᵢ Aᵢ, to a vector without
/// materializing the product matrix.
///
/// Factors may be rectangular; the input length must equal the product of
/// the factor column counts and the output length is the product of the row
/// counts. Cost is Σᵢ (total size)·rowsᵢ instead of (total size)².
pub fn kron_apply(factors: &[&CMatrix], v: &[Complex64]) -> Result<Vec<Complex64>, Error> {
    let in_dim: usize = factors.iter().map(|a| a.cols()).product();
    if factors.is_empty() || v.len() != in_dim {
        return Err(Error::dim_mismatch(format!(
            "kron_apply: vector length {} vs factor column product {in_dim}",
            v.len()
        )));
    }
    // Current tensor shape: factors already applied contribute rows, the
    // rest still contribute cols.
    let mut shape: Vec<usize> = factors.iter().map(|a| a.cols()).collect();
    let mut cur = v.to_vec();
    for (f, a) in factors.iter().enumerate() {
        let (rows, cols) = (a.rows(), a.cols());
        let inner: usize = shape[f + 1..].iter().product();
        let outer: usize = shape[..f].iter().product();
        let mut next = vec![Complex64::new(0.0, 0.0); outer * rows * inner];
        for o in 0..outer {
            let in_block = o * cols * inner;
            let out_block = o * rows * inner;
            for r in 0..rows {
                for c in 0..cols {
                    let a_rc = a.get(r, c);
                    if a_rc.re == 0.0 && a_rc.im == 0.0 {
                        continue;
                    }
                    let src = in_block + c * inner;
                    let dst = out_block + r * inner;
                    for k in 0..inner {
                        next[dst + k] += a_rc * cur[src + k];
                    }
                }
            }
        }
        cur = next;
        shape[f] = rows;
    }
    Ok(cur)
}

/// Tensor product of vectors, first factor most significant.
pub fn kron_vec(vectors: &[&[Complex64]]) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(1.0, 0.0)];
    for v in vectors {
        let mut next = Vec::with_capacity(acc.len() * v.len());
        for a in &acc {
            for b in *v {
                next.push(a * b);
            }
        }
        acc = next;
    }
    acc
}
