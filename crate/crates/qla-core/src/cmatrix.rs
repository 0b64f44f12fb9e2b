//! Dense complex matrices, row-major, with the arithmetic the rest of the
//! workspace builds on.
//!
//! Serialization: a matrix is a JSON array of rows, each row an array of
//! `[re, im]` pairs, so the 2×2 identity is
//! `[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::ops::{Add, Mul, Sub};

/// Dense rows×cols complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// All-zero rows×cols matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// n×n identity.
    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from an entry function.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Build from row-major storage; panics if the length is not rows·cols.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length mismatch");
        CMatrix { rows, cols, data }
    }

    /// Square matrix with the given real diagonal.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of equal length).
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        assert!(!columns.is_empty(), "from_columns needs at least one column");
        let rows = columns[0].len();
        assert!(
            columns.iter().all(|c| c.len() == rows),
            "from_columns requires equal-length columns"
        );
        CMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    /// Rank-one outer product u·v†.
    pub fn from_outer(u: &[Complex64], v: &[Complex64]) -> Self {
        CMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.cols + j] = value;
    }

    /// Row-major storage slice.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// One row as a slice.
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// One column, copied out.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Entry-wise complex conjugate.
    pub fn conjugate(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Sum of diagonal entries (requires square).
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows)
            .map(|i| self.get(i, i))
            .fold(Complex64::new(0.0, 0.0), |acc, z| acc + z)
    }

    /// Matrix product self·rhs; panics on inner-dimension mismatch.
    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul inner dimensions {}×{} · {}×{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let lhs_row = i * rhs.cols;
                let rhs_row = k * rhs.cols;
                for j in 0..rhs.cols {
                    out.data[lhs_row + j] += a * rhs.data[rhs_row + j];
                }
            }
        }
        out
    }

    /// Matrix–vector product; panics on dimension mismatch.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Complex64::new(0.0, 0.0), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    /// self scaled by a complex factor.
    pub fn scaled(&self, z: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    /// self scaled by a real factor.
    pub fn scaled_re(&self, x: f64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * x).collect(),
        }
    }

    /// Kronecker (tensor) product, first factor most significant.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = CMatrix::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for i2 in 0..rhs.rows {
                    let r = i1 * rhs.rows + i2;
                    for j2 in 0..rhs.cols {
                        out.set(r, j1 * rhs.cols + j2, a * rhs.get(i2, j2));
                    }
                }
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry-wise |self − other|; panics if shapes differ.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.rows, other.rows, "max_abs_diff row mismatch");
        assert_eq!(self.cols, other.cols, "max_abs_diff col mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry-wise |M − M†| over the square matrix, 0 for exactly
    /// Hermitian input.
    pub fn hermiticity_residual(&self) -> f64 {
        assert!(self.is_square(), "hermiticity_residual requires square");
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Frobenius norm √Σ|mᵢⱼ|².
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.rows, rhs.rows, "add row mismatch");
        assert_eq!(self.cols, rhs.cols, "add col mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.rows, rhs.rows, "sub row mismatch");
        assert_eq!(self.cols, rhs.cols, "sub col mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

/// Inner product ⟨a|b⟩ = Σᵢ conj(aᵢ)·bᵢ, conjugate-linear in the first slot.
pub fn vdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len(), "vdot length mismatch");
    a.iter()
        .zip(b)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y)
}

/// Euclidean norm of a complex vector.
pub fn vnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Deserialize::deserialize(deserializer)?;
        let r = rows.len();
        if r == 0 {
            return Err(D::Error::custom("matrix must have at least one row"));
        }
        let c = rows[0].len();
        if c == 0 {
            return Err(D::Error::custom("matrix must have at least one column"));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(D::Error::custom("matrix rows must all have equal length"));
        }
        Ok(CMatrix::from_fn(r, c, |i, j| {
            Complex64::new(rows[i][j][0], rows[i][j][1])
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_matches_hand_computation() {
        // [[1, i], [0, 2]] · [[1, 1], [i, 0]] = [[1+i·i, 1], [2i, 0]] = [[0, 1], [2i, 0]]
        let a = CMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let b = CMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let p = a.matmul(&b);
        assert_eq!(p.get(0, 0), c(0.0, 0.0));
        assert_eq!(p.get(0, 1), c(1.0, 0.0));
        assert_eq!(p.get(1, 0), c(0.0, 2.0));
        assert_eq!(p.get(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn adjoint_is_an_involution_and_conjugates() {
        let a = CMatrix::from_vec(2, 3, vec![
            c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5),
            c(-1.0, 0.0), c(2.0, 2.0), c(0.0, 0.0),
        ]);
        let ad = a.adjoint();
        assert_eq!(ad.rows(), 3);
        assert_eq!(ad.cols(), 2);
        assert_eq!(ad.get(0, 0), c(1.0, -2.0));
        assert_eq!(ad.get(2, 1), c(0.0, 0.0));
        assert_eq!(ad.adjoint(), a);
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = CMatrix::identity(2);
        assert_eq!(i2.kron(&i2), CMatrix::identity(4));
    }

    #[test]
    fn matvec_agrees_with_matmul_on_column() {
        let a = CMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, (i as f64) - (j as f64)));
        let v = vec![c(1.0, 1.0), c(0.0, -2.0), c(0.5, 0.0)];
        let col = CMatrix::from_columns(&[v.clone()]);
        let prod = a.matmul(&col);
        let mv = a.matvec(&v);
        for i in 0..3 {
            assert!((prod.get(i, 0) - mv[i]).norm() == 0.0);
        }
    }

    #[test]
    fn json_round_trip_and_frozen_identity_encoding() {
        let i2 = CMatrix::identity(2);
        let text = serde_json::to_string(&i2).unwrap();
        assert_eq!(text, "[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]");
        let back: CMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, i2);

        let a = CMatrix::from_fn(2, 3, |i, j| c(i as f64 + 0.25, j as f64 - 0.5));
        let back: CMatrix = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn ragged_json_is_rejected() {
        let ragged = "[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0]]]";
        assert!(serde_json::from_str::<CMatrix>(ragged).is_err());
        assert!(serde_json::from_str::<CMatrix>("[]").is_err());
    }

    #[test]
    fn vdot_is_conjugate_linear_in_first_slot() {
        let u = vec![c(0.0, 1.0), c(2.0, 0.0)];
        let v = vec![c(1.0, 0.0), c(0.0, 1.0)];
        // ⟨u|v⟩ = conj(i)·1 + conj(2)·i = −i + 2i = i
        assert_eq!(vdot(&u, &v), c(0.0, 1.0));
        assert!((vnorm(&u) - 5.0_f64.sqrt()).abs() < 1e-15);
    }
}
