//! Minimal dense row-major matrix with the few linear-algebra routines the
//! pipeline needs: column statistics, sample covariance, Cholesky
//! factorization, and triangular solves. Dimensions here are small
//! (d ≤ a few dozen), so a hand-rolled dense implementation is both simpler
//! and faster to audit than a general linear-algebra dependency.

use alloc::vec;
use alloc::vec::Vec;

// no_std float math comes from the Float trait (libm); std test builds
// resolve the same calls inherently, which would flag this as unused
#[allow(unused_imports)]
use num_traits::Float;


use crate::error::Error;
use crate::Result;

/// Dense row-major `f64` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Build from a flat row-major buffer. Errors if the length is not
    /// `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Build from row slices; all rows must share a length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Gather the given rows into a new matrix, in the order given.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Per-column means.
    pub fn col_means(&self) -> Vec<f64> {
        let mut means = vec![0.0; self.cols];
        for row in self.iter_rows() {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        let n = self.rows as f64;
        for m in &mut means {
            *m /= n;
        }
        means
    }

    /// Per-column variances with divisor `n - ddof`.
    pub fn col_variances(&self, ddof: usize) -> Vec<f64> {
        let means = self.col_means();
        let mut acc = vec![0.0; self.cols];
        for row in self.iter_rows() {
            for ((a, v), m) in acc.iter_mut().zip(row).zip(&means) {
                let dev = v - m;
                *a += dev * dev;
            }
        }
        let denom = (self.rows - ddof) as f64;
        for a in &mut acc {
            *a /= denom;
        }
        acc
    }

    /// Sample covariance of the rows, divisor `n - ddof`.
    pub fn covariance(&self, ddof: usize) -> Result<Matrix> {
        if self.rows <= ddof {
            return Err(Error::InsufficientData(alloc::format!(
                "covariance needs more than {ddof} rows, got {}",
                self.rows
            )));
        }
        let d = self.cols;
        let means = self.col_means();
        let mut cov = Matrix::zeros(d, d);
        let mut dev = vec![0.0; d];
        for row in self.iter_rows() {
            for (dv, (v, m)) in dev.iter_mut().zip(row.iter().zip(&means)) {
                *dv = v - m;
            }
            for i in 0..d {
                let di = dev[i];
                let out = &mut cov.data[i * d..(i + 1) * d];
                for (o, dj) in out[i..].iter_mut().zip(&dev[i..]) {
                    *o += di * dj;
                }
            }
        }
        let denom = (self.rows - ddof) as f64;
        for i in 0..d {
            for j in i..d {
                let v = cov.get(i, j) / denom;
                cov.set(i, j, v);
                cov.set(j, i, v);
            }
        }
        Ok(cov)
    }
}

/// Cholesky factorization of a symmetric positive-definite matrix; returns
/// the lower-triangular factor `L` with `A = L·Lᵀ`.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let d = a.rows();
    if a.cols() != d {
        return Err(Error::DimMismatch {
            expected: d,
            got: a.cols(),
        });
    }
    let mut l = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..=i {
            let mut sum = a.get(i, j);
            for k in 0..j {
                sum -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return Err(Error::NotPositiveDefinite);
                }
                l.set(i, j, sum.sqrt());
            } else {
                l.set(i, j, sum / l.get(j, j));
            }
        }
    }
    Ok(l)
}

/// Solve `L·y = b` in place for lower-triangular `L`.
pub fn forward_substitute(l: &Matrix, b: &mut [f64]) {
    let d = l.rows();
    debug_assert_eq!(b.len(), d);
    for i in 0..d {
        let mut sum = b[i];
        let row = l.row(i);
        for (k, bk) in b[..i].iter().enumerate() {
            sum -= row[k] * bk;
        }
        b[i] = sum / row[i];
    }
}

/// `L·z` for lower-triangular `L`.
pub fn lower_matvec(l: &Matrix, z: &[f64]) -> Vec<f64> {
    let d = l.rows();
    debug_assert_eq!(z.len(), d);
    let mut out = vec![0.0; d];
    for i in 0..d {
        let row = l.row(i);
        let mut sum = 0.0;
        for (k, zk) in z[..=i].iter().enumerate() {
            sum += row[k] * zk;
        }
        out[i] = sum;
    }
    out
}

/// Squared Euclidean distance between two equal-length slices.
#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Euclidean distance between two equal-length slices.
#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn covariance_matches_hand_computation() {
        // rows: (0,0), (1,2), (2,4) — second column is 2x the first
        let m = Matrix::from_vec(3, 2, vec![0.0, 0.0, 1.0, 2.0, 2.0, 4.0]).unwrap();
        let cov = m.covariance(1).unwrap();
        assert_close(cov.get(0, 0), 1.0, 1e-12);
        assert_close(cov.get(0, 1), 2.0, 1e-12);
        assert_close(cov.get(1, 1), 4.0, 1e-12);
    }

    #[test]
    fn cholesky_roundtrip() {
        let a = Matrix::from_vec(3, 3, vec![4.0, 2.0, 0.4, 2.0, 5.0, 1.0, 0.4, 1.0, 3.0]).unwrap();
        let l = cholesky(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += l.get(i, k) * l.get(j, k);
                }
                assert_close(acc, a.get(i, j), 1e-12);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = Matrix::from_vec(2, 2, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        assert_eq!(cholesky(&a), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn forward_substitute_solves() {
        let l = Matrix::from_vec(2, 2, vec![2.0, 0.0, 1.0, 3.0]).unwrap();
        let mut b = [4.0, 11.0];
        forward_substitute(&l, &mut b);
        assert_close(b[0], 2.0, 1e-12);
        assert_close(b[1], 3.0, 1e-12);
    }

    #[test]
    fn lower_matvec_multiplies() {
        let l = Matrix::from_vec(2, 2, vec![2.0, 0.0, 1.0, 3.0]).unwrap();
        let out = lower_matvec(&l, &[1.0, 1.0]);
        assert_eq!(out, vec![2.0, 4.0]);
    }
}
