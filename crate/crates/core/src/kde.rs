//! Multivariate Gaussian kernel density estimation.
//!
//! A fitted model keeps the support points and the lower-triangular Cholesky
//! factor `L` of the bandwidth matrix `H = L·Lᵀ`. Scott's rule sets
//! `H = n^(−2/(d+4)) · (Σ̂ + ε·I)` with `Σ̂` the sample covariance of the
//! support (divisor n−1) and `ε` a small diagonal regularizer; Silverman's
//! rule replaces the factor with `(n·(d+2)/4)^(−2/(d+4))`. Densities are
//! accumulated in log space with a max shift so that d = 27 kernels do not
//! underflow; sampling draws `support_i + L·z` with an independent child
//! stream per output row, making results independent of batching and worker
//! count.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;


use crate::error::Error;
use crate::matrix::{cholesky, forward_substitute, lower_matvec, Matrix};
use crate::rng::{self, RngKey};
use crate::Result;

const LOG_2PI: f64 = 1.837877066409345483560659472811;

/// Bandwidth selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandwidthRule {
    Scott,
    Silverman,
}

impl BandwidthRule {
    /// Multiplier applied to the (regularized) sample covariance.
    pub fn covariance_factor(self, n: usize, d: usize) -> f64 {
        let exponent = -2.0 / (d as f64 + 4.0);
        match self {
            BandwidthRule::Scott => (n as f64).powf(exponent),
            BandwidthRule::Silverman => ((n as f64) * (d as f64 + 2.0) / 4.0).powf(exponent),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BandwidthRule::Scott => "scott",
            BandwidthRule::Silverman => "silverman",
        }
    }
}

/// A fitted kernel density estimate. Immutable; evaluation and sampling are
/// read-only and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct KdeModel {
    support: Matrix,
    chol: Matrix,
    log_norm: f64,
    rule: BandwidthRule,
    regularization: f64,
}

impl KdeModel {
    /// Fit a KDE on `points` (one support point per row).
    pub fn fit(points: &Matrix, rule: BandwidthRule, regularization: f64) -> Result<KdeModel> {
        let (n, d) = (points.rows(), points.cols());
        if n < 2 {
            return Err(Error::InsufficientData(format!(
                "KDE fit needs at least 2 points, got {n}"
            )));
        }
        if d == 0 {
            return Err(Error::InvalidParam("KDE fit needs at least 1 feature".into()));
        }
        if !points.is_finite() {
            return Err(Error::InvalidParam("KDE fit requires finite points".into()));
        }
        if regularization < 0.0 {
            return Err(Error::InvalidParam(
                "regularization must be nonnegative".into(),
            ));
        }
        let factor = rule.covariance_factor(n, d);
        let mut h = points.covariance(1)?;
        for i in 0..d {
            for j in 0..d {
                let v = factor * (h.get(i, j) + if i == j { regularization } else { 0.0 });
                h.set(i, j, v);
            }
        }
        let chol = cholesky(&h)?;
        let mut log_det_l = 0.0;
        for i in 0..d {
            log_det_l += chol.get(i, i).ln();
        }
        Ok(KdeModel {
            support: points.clone(),
            chol,
            log_norm: -0.5 * d as f64 * LOG_2PI - log_det_l,
            rule,
            regularization,
        })
    }

    /// Rebuild a model from its serialized parts (support and Cholesky
    /// factor), re-deriving the normalization constant.
    pub fn from_parts(
        support: Matrix,
        chol: Matrix,
        rule: BandwidthRule,
        regularization: f64,
    ) -> Result<KdeModel> {
        let d = support.cols();
        if chol.rows() != d || chol.cols() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: chol.rows(),
            });
        }
        let mut log_det_l = 0.0;
        for i in 0..d {
            let diag = chol.get(i, i);
            if diag <= 0.0 {
                return Err(Error::NotPositiveDefinite);
            }
            log_det_l += diag.ln();
        }
        Ok(KdeModel {
            support,
            chol,
            log_norm: -0.5 * d as f64 * LOG_2PI - log_det_l,
            rule,
            regularization,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.support.rows()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.support.cols()
    }

    pub fn support(&self) -> &Matrix {
        &self.support
    }

    /// Lower-triangular factor of the bandwidth matrix.
    pub fn bandwidth_chol(&self) -> &Matrix {
        &self.chol
    }

    pub fn rule(&self) -> BandwidthRule {
        self.rule
    }

    pub fn regularization(&self) -> f64 {
        self.regularization
    }

    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    /// Log of the mixture density at `x`.
    pub fn log_density(&self, x: &[f64]) -> Result<f64> {
        let d = self.dim();
        if x.len() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: x.len(),
            });
        }
        // per-kernel log densities: log_norm − ½‖L⁻¹(x − s_i)‖²
        let mut exponents = Vec::with_capacity(self.n());
        let mut work = Vec::with_capacity(d);
        for s in self.support.iter_rows() {
            work.clear();
            work.extend(x.iter().zip(s).map(|(a, b)| a - b));
            forward_substitute(&self.chol, &mut work);
            let sq: f64 = work.iter().map(|v| v * v).sum();
            exponents.push(-0.5 * sq);
        }
        let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = exponents.iter().map(|e| (e - max).exp()).sum();
        Ok(self.log_norm + max + sum.ln() - (self.n() as f64).ln())
    }

    /// Mixture density at `x`: `(1/n)·Σᵢ N(x; support_i, H)`.
    pub fn density(&self, x: &[f64]) -> Result<f64> {
        Ok(self.log_density(x)?.exp())
    }

    /// One sample for the stream at `key`: a uniformly chosen support point
    /// plus `L·z` noise.
    pub fn sample_row(&self, key: RngKey) -> Vec<f64> {
        let mut r = key.rng();
        let i = rng::uniform_index(&mut r, self.n());
        let z = rng::normal_vec(&mut r, self.dim());
        let noise = lower_matvec(&self.chol, &z);
        self.support
            .row(i)
            .iter()
            .zip(noise)
            .map(|(s, e)| s + e)
            .collect()
    }

    /// `count` samples; row `r` uses the child stream `key.child(r)`, so the
    /// result is identical however the rows are batched or parallelized.
    pub fn sample(&self, count: usize, key: RngKey) -> Matrix {
        let d = self.dim();
        let mut out = Matrix::zeros(count, d);
        for r in 0..count {
            let row = self.sample_row(key.child(r as u64));
            out.row_mut(r).copy_from_slice(&row);
        }
        out
    }
}
