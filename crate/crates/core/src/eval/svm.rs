//! Soft-margin SVM trained by sequential minimal optimization.
//!
//! The dual problem is solved by Platt-style pairwise coordinate ascent with
//! deterministic index selection (first-violator sweeps plus the max
//! |E₁−E₂| second-choice heuristic), a KKT tolerance, and a hard cap on
//! outer passes. The kernel matrix is precomputed when it fits comfortably
//! in memory and recomputed row-by-row otherwise, which changes nothing
//! numerically.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;


use crate::error::Error;
use crate::matrix::Matrix;
use crate::Result;

/// Cache the full kernel matrix up to this many rows.
const FULL_CACHE_MAX_N: usize = 2048;
/// Minimum meaningful alpha step, relative.
const STEP_EPS: f64 = 1e-6;

/// SVM hyperparameters. `gamma = None` selects the "scale" default
/// `1 / (d · mean feature variance)` at training time.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    pub gamma: Option<f64>,
    pub tol: f64,
    pub max_passes: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            gamma: None,
            tol: 1e-3,
            max_passes: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SvmKernel {
    Linear,
    Rbf { gamma: f64 },
}

impl SvmKernel {
    #[inline]
    fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            SvmKernel::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            SvmKernel::Rbf { gamma } => {
                let sq: f64 = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| {
                        let d = x - y;
                        d * d
                    })
                    .sum();
                (-gamma * sq).exp()
            }
        }
    }
}

/// The "scale" gamma convention: `1 / (d · mean per-feature variance)`.
pub fn scale_gamma(features: &Matrix) -> f64 {
    let d = features.cols();
    let mean_var =
        features.col_variances(0).iter().sum::<f64>() / d as f64;
    if mean_var > 1e-300 {
        1.0 / (d as f64 * mean_var)
    } else {
        1.0 / d as f64
    }
}

/// A trained SVM: support vectors, their `αᵢyᵢ` coefficients, and the bias.
#[derive(Debug, Clone)]
pub struct SvmModel {
    kernel: SvmKernel,
    support: Matrix,
    coef: Vec<f64>,
    bias: f64,
}

impl SvmModel {
    /// Signed margin `Σ αᵢyᵢ K(svᵢ, x) + b`; positive means class 1.
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.support.cols() {
            return Err(Error::DimMismatch {
                expected: self.support.cols(),
                got: x.len(),
            });
        }
        let mut acc = self.bias;
        for (row, c) in self.support.iter_rows().zip(&self.coef) {
            acc += c * self.kernel.eval(row, x);
        }
        Ok(acc)
    }

    pub fn n_support(&self) -> usize {
        self.support.rows()
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn kernel(&self) -> SvmKernel {
        self.kernel
    }
}

struct Smo<'a> {
    x: &'a Matrix,
    y: Vec<f64>,
    kernel: SvmKernel,
    c: f64,
    tol: f64,
    alpha: Vec<f64>,
    errors: Vec<f64>,
    bias: f64,
    cache: Option<Vec<f64>>,
    row1: Vec<f64>,
    row2: Vec<f64>,
}

impl<'a> Smo<'a> {
    fn new(x: &'a Matrix, y: Vec<f64>, kernel: SvmKernel, c: f64, tol: f64) -> Self {
        let n = x.rows();
        let cache = if n <= FULL_CACHE_MAX_N {
            let mut k = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let v = kernel.eval(x.row(i), x.row(j));
                    k[i * n + j] = v;
                    k[j * n + i] = v;
                }
            }
            Some(k)
        } else {
            None
        };
        // with all alphas at 0, f(x) = 0 and E_i = -y_i
        let errors = y.iter().map(|v| -v).collect();
        Smo {
            x,
            y,
            kernel,
            c,
            tol,
            alpha: vec![0.0; n],
            errors,
            bias: 0.0,
            cache,
            row1: vec![0.0; n],
            row2: vec![0.0; n],
        }
    }

    fn n(&self) -> usize {
        self.x.rows()
    }

    fn fill_row(cache: &Option<Vec<f64>>, kernel: SvmKernel, x: &Matrix, i: usize, out: &mut [f64]) {
        let n = x.rows();
        match cache {
            Some(k) => out.copy_from_slice(&k[i * n..(i + 1) * n]),
            None => {
                let xi = x.row(i);
                for (j, o) in out.iter_mut().enumerate() {
                    *o = kernel.eval(xi, x.row(j));
                }
            }
        }
    }

    #[inline]
    fn non_bound(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.c
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1o, a2o) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.errors[i1], self.errors[i2]);
        let s = y1 * y2;
        let (lo, hi) = if (y1 - y2).abs() > 0.5 {
            ((a2o - a1o).max(0.0), (self.c + a2o - a1o).min(self.c))
        } else {
            ((a1o + a2o - self.c).max(0.0), (a1o + a2o).min(self.c))
        };
        if lo >= hi {
            return false;
        }
        Self::fill_row(&self.cache, self.kernel, self.x, i1, &mut self.row1);
        Self::fill_row(&self.cache, self.kernel, self.x, i2, &mut self.row2);
        let k11 = self.row1[i1];
        let k12 = self.row1[i2];
        let k22 = self.row2[i2];
        let eta = k11 + k22 - 2.0 * k12;
        if eta <= 1e-12 {
            // degenerate pair (duplicate rows); let another pair progress
            return false;
        }
        let mut a2n = (a2o + y2 * (e1 - e2) / eta).clamp(lo, hi);
        if a2n < 1e-10 {
            a2n = 0.0;
        } else if a2n > self.c - 1e-10 {
            a2n = self.c;
        }
        if (a2n - a2o).abs() < STEP_EPS * (a2n + a2o + STEP_EPS) {
            return false;
        }
        let a1n = a1o + s * (a2o - a2n);

        let d1 = y1 * (a1n - a1o);
        let d2 = y2 * (a2n - a2o);
        let b1 = self.bias - e1 - d1 * k11 - d2 * k12;
        let b2 = self.bias - e2 - d1 * k12 - d2 * k22;
        let new_bias = if a1n > 0.0 && a1n < self.c {
            b1
        } else if a2n > 0.0 && a2n < self.c {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        let db = new_bias - self.bias;
        for ((err, r1), r2) in self.errors.iter_mut().zip(&self.row1).zip(&self.row2) {
            *err += d1 * r1 + d2 * r2 + db;
        }
        self.alpha[i1] = a1n;
        self.alpha[i2] = a2n;
        self.bias = new_bias;
        true
    }

    fn examine(&mut self, i2: usize) -> bool {
        let y2 = self.y[i2];
        let a2 = self.alpha[i2];
        let r2 = self.errors[i2] * y2;
        let violates =
            (r2 < -self.tol && a2 < self.c) || (r2 > self.tol && a2 > 0.0);
        if !violates {
            return false;
        }
        // second-choice heuristic: largest |E1 - E2| among non-bound alphas
        let e2 = self.errors[i2];
        let mut best: Option<(f64, usize)> = None;
        for i in 0..self.n() {
            if self.non_bound(i) {
                let gap = (self.errors[i] - e2).abs();
                if best.map_or(true, |(g, _)| gap > g) {
                    best = Some((gap, i));
                }
            }
        }
        if let Some((_, i1)) = best {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        for i1 in 0..self.n() {
            if self.non_bound(i1) && self.take_step(i1, i2) {
                return true;
            }
        }
        for i1 in 0..self.n() {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }

    fn solve(&mut self, max_passes: usize) {
        let mut examine_all = true;
        let mut passes = 0;
        loop {
            let mut changed = 0usize;
            for i in 0..self.n() {
                if examine_all || self.non_bound(i) {
                    changed += self.examine(i) as usize;
                }
            }
            passes += 1;
            if examine_all {
                if changed == 0 {
                    break;
                }
                examine_all = false;
            } else if changed == 0 {
                examine_all = true;
            }
            if passes >= max_passes {
                break;
            }
        }
    }
}

/// Train an SVM on binary labels (0 → −1, 1 → +1).
pub fn train_svm(
    params: &SvmParams,
    kernel: SvmKernel,
    features: &Matrix,
    labels: &[u8],
) -> Result<SvmModel> {
    if !(params.c > 0.0) {
        return Err(Error::InvalidParam("C must be positive".into()));
    }
    if let SvmKernel::Rbf { gamma } = kernel {
        if !(gamma > 0.0) {
            return Err(Error::InvalidParam("gamma must be positive".into()));
        }
    }
    let n = features.rows();
    if n != labels.len() {
        return Err(Error::DimMismatch {
            expected: n,
            got: labels.len(),
        });
    }
    if n < 2 {
        return Err(Error::InsufficientData(
            "SVM training needs at least 2 rows".into(),
        ));
    }
    let y: Vec<f64> = labels.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
    let mut smo = Smo::new(features, y, kernel, params.c, params.tol);
    smo.solve(params.max_passes);

    let sv_idx: Vec<usize> = (0..n).filter(|&i| smo.alpha[i] > 0.0).collect();
    let coef: Vec<f64> = sv_idx.iter().map(|&i| smo.alpha[i] * smo.y[i]).collect();
    Ok(SvmModel {
        kernel,
        support: features.select_rows(&sv_idx),
        coef,
        bias: smo.bias,
    })
}
