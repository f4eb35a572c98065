//! Tabular data model: labeled feature matrices, median imputation, z-score
//! normalization, stratified splitting, and the seeded benchmark-cohort
//! simulator that stands in for the non-public hospital databases.
//!
//! Missing values are carried as `NaN` until [`impute_median`] (or
//! [`impute_with`]) resolves them; every other operation requires fully
//! observed data.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;


use crate::error::Error;
use crate::matrix::{cholesky, lower_matvec, Matrix};
use crate::rng::{self, RngKey};
use crate::Result;

/// Std below this is treated as a constant (degenerate) feature.
pub const DEGENERATE_STD: f64 = 1e-12;

/// A labeled tabular cohort. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<u8>,
    feature_names: Vec<String>,
    normalized: bool,
}

impl Dataset {
    /// Build a dataset, checking the shape invariants: one label per row,
    /// one name per column, labels in {0, 1}.
    pub fn new(
        features: Matrix,
        labels: Vec<u8>,
        feature_names: Vec<String>,
        normalized: bool,
    ) -> Result<Self> {
        if features.rows() != labels.len() {
            return Err(Error::DimMismatch {
                expected: features.rows(),
                got: labels.len(),
            });
        }
        if features.cols() != feature_names.len() {
            return Err(Error::DimMismatch {
                expected: features.cols(),
                got: feature_names.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::InvalidParam(format!(
                "labels must be 0 or 1, found {bad}"
            )));
        }
        Ok(Dataset {
            features,
            labels,
            feature_names,
            normalized,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.features.rows()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    #[inline]
    pub fn features(&self) -> &Matrix {
        &self.features
    }

    #[inline]
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    #[inline]
    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    #[inline]
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn label_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - ones, ones]
    }

    /// Row indices belonging to class `label`, in stored order.
    pub fn class_indices(&self, label: u8) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == label)
            .map(|(i, _)| i)
            .collect()
    }

    /// Feature rows of one class as a new matrix.
    pub fn class_features(&self, label: u8) -> Matrix {
        self.features.select_rows(&self.class_indices(label))
    }

    pub fn has_missing(&self) -> bool {
        self.features.as_slice().iter().any(|v| v.is_nan())
    }

    /// Sub-dataset with the given rows, in the order given.
    pub fn select(&self, idx: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(idx),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
            normalized: self.normalized,
        }
    }

    /// Concatenate rows of two datasets with identical schemas.
    pub fn concat(&self, other: &Dataset) -> Result<Dataset> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let mut data = Vec::with_capacity((self.n() + other.n()) * self.dim());
        data.extend_from_slice(self.features.as_slice());
        data.extend_from_slice(other.features.as_slice());
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Ok(Dataset {
            features: Matrix::from_vec(self.n() + other.n(), self.dim(), data)?,
            labels,
            feature_names: self.feature_names.clone(),
            normalized: self.normalized,
        })
    }
}

/// Per-feature normalization statistics fitted on one dataset and applied to
/// others. Degenerate (zero-variance) features keep `std = 1` and map to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct NormStats {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub degenerate: Vec<bool>,
}

/// Per-feature medians over observed (non-NaN) values.
///
/// Errors with the feature's name if a column has no observed value at all.
pub fn feature_medians(ds: &Dataset) -> Result<Vec<f64>> {
    let d = ds.dim();
    let mut medians = Vec::with_capacity(d);
    let mut col = Vec::with_capacity(ds.n());
    for j in 0..d {
        col.clear();
        for row in ds.features.iter_rows() {
            if !row[j].is_nan() {
                col.push(row[j]);
            }
        }
        if col.is_empty() {
            return Err(Error::AllMissing {
                feature: ds.feature_names[j].clone(),
            });
        }
        col.sort_unstable_by(f64::total_cmp);
        let m = col.len();
        let median = if m % 2 == 1 {
            col[m / 2]
        } else {
            0.5 * (col[m / 2 - 1] + col[m / 2])
        };
        medians.push(median);
    }
    Ok(medians)
}

/// Replace each missing cell with the given per-feature fill value.
pub fn impute_with(ds: &Dataset, fill: &[f64]) -> Result<Dataset> {
    if fill.len() != ds.dim() {
        return Err(Error::DimMismatch {
            expected: ds.dim(),
            got: fill.len(),
        });
    }
    let mut features = ds.features.clone();
    for r in 0..features.rows() {
        let row = features.row_mut(r);
        for (v, f) in row.iter_mut().zip(fill) {
            if v.is_nan() {
                *v = *f;
            }
        }
    }
    Dataset::new(features, ds.labels.clone(), ds.feature_names.clone(), ds.normalized)
}

/// Median-impute a dataset using its own per-feature medians.
pub fn impute_median(ds: &Dataset) -> Result<Dataset> {
    let medians = feature_medians(ds)?;
    impute_with(ds, &medians)
}

/// Fit z-score statistics: per-feature sample mean and population standard
/// deviation. The dataset must already be imputed.
pub fn zscore_fit(ds: &Dataset) -> Result<NormStats> {
    if ds.has_missing() {
        return Err(Error::InvalidParam(
            "dataset contains missing values; impute before normalizing".into(),
        ));
    }
    let means = ds.features.col_means();
    let vars = ds.features.col_variances(0);
    let mut stds = Vec::with_capacity(vars.len());
    let mut degenerate = Vec::with_capacity(vars.len());
    for v in &vars {
        let s = v.sqrt();
        if s < DEGENERATE_STD {
            stds.push(1.0);
            degenerate.push(true);
        } else {
            stds.push(s);
            degenerate.push(false);
        }
    }
    Ok(NormStats {
        means,
        stds,
        degenerate,
    })
}

/// Apply z-score statistics: `(x − mean) / std`, degenerate features → 0.
pub fn zscore_apply(ds: &Dataset, stats: &NormStats) -> Result<Dataset> {
    if stats.means.len() != ds.dim() {
        return Err(Error::DimMismatch {
            expected: ds.dim(),
            got: stats.means.len(),
        });
    }
    let mut features = ds.features.clone();
    for r in 0..features.rows() {
        let row = features.row_mut(r);
        for j in 0..row.len() {
            row[j] = if stats.degenerate[j] {
                0.0
            } else {
                (row[j] - stats.means[j]) / stats.stds[j]
            };
        }
    }
    Dataset::new(features, ds.labels.clone(), ds.feature_names.clone(), true)
}

/// Invert z-scoring back to raw units: `z·std + mean`, degenerate → mean.
pub fn zscore_invert(ds: &Dataset, stats: &NormStats) -> Result<Dataset> {
    if stats.means.len() != ds.dim() {
        return Err(Error::DimMismatch {
            expected: ds.dim(),
            got: stats.means.len(),
        });
    }
    let mut features = ds.features.clone();
    for r in 0..features.rows() {
        let row = features.row_mut(r);
        for j in 0..row.len() {
            row[j] = if stats.degenerate[j] {
                stats.means[j]
            } else {
                row[j] * stats.stds[j] + stats.means[j]
            };
        }
    }
    Dataset::new(features, ds.labels.clone(), ds.feature_names.clone(), false)
}

/// Stratified train/test split: each class is shuffled and split
/// independently, `floor(train_fraction · n_class)` rows to train. The two
/// parts partition the input rows; deterministic for a fixed seed.
pub fn split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParam(format!(
            "train_fraction must lie in (0,1), got {train_fraction}"
        )));
    }
    if ds.n() < 2 {
        return Err(Error::InsufficientData(format!(
            "split needs at least 2 rows, got {}",
            ds.n()
        )));
    }
    let key = RngKey::new(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for class in 0..2u8 {
        let members = ds.class_indices(class);
        if members.len() < 2 {
            return Err(Error::SmallClass {
                label: class,
                count: members.len(),
            });
        }
        let order = rng::shuffled_indices(key.child(class as u64), members.len());
        let n_train = (train_fraction * members.len() as f64).floor() as usize;
        for (pos, &o) in order.iter().enumerate() {
            if pos < n_train {
                train_idx.push(members[o]);
            } else {
                test_idx.push(members[o]);
            }
        }
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((ds.select(&train_idx), ds.select(&test_idx)))
}

/// Parameters of the simulated benchmark cohort.
///
/// Class-`c` rows are drawn as
///
/// ```text
/// x = sqrt(covariance_scale) · ( W·(u + c·latent_class_shift/sqrt(r)·1)  +  L_band·ε )
///     + c·class_mean_shift + external_drift
/// ```
///
/// with `u ~ N(0, I_r)`, `ε ~ N(0, I_d)`, `W` a fixed `d×r` loading matrix
/// with `N(0, factor_strength²)` entries drawn from the cohort seed, and
/// `L_band` the Cholesky factor of the band matrix (unit diagonal,
/// `band_correlation` on the first off-diagonals). The latent factors give
/// the cohort a low intrinsic dimension like real clinical tables; with
/// `latent_dim = 0` the covariance reduces to
/// `covariance_scale · (I + band)`. Class separation defaults to living in
/// latent space (`latent_class_shift`, in latent standard deviations);
/// `class_mean_shift` adds an ambient mean offset in raw feature units.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortSpec {
    pub n_per_class: [usize; 2],
    pub n_features: usize,
    pub class_mean_shift: Vec<f64>,
    pub covariance_scale: f64,
    pub band_correlation: f64,
    pub latent_dim: usize,
    pub factor_strength: f64,
    pub latent_class_shift: f64,
    /// Mean shift applied to every row when simulating the external cohort;
    /// `None` (or all zeros) for the primary cohort.
    pub external_drift: Option<Vec<f64>>,
}

impl CohortSpec {
    /// Primary-cohort defaults shaped like the 1275-patient training
    /// database: 979/296 rows, 27 features.
    pub fn primary_default() -> Self {
        CohortSpec {
            n_per_class: [979, 296],
            n_features: 27,
            class_mean_shift: vec![0.0; 27],
            covariance_scale: 1.0,
            band_correlation: 0.3,
            latent_dim: 4,
            factor_strength: 1.2,
            latent_class_shift: 1.1,
            external_drift: None,
        }
    }

    /// External-validation defaults shaped like the balanced 2028-patient
    /// cohort, with a mild distribution drift on every feature.
    pub fn external_default() -> Self {
        CohortSpec {
            n_per_class: [1014, 1014],
            external_drift: Some(vec![0.25; 27]),
            ..CohortSpec::primary_default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_per_class[0] == 0 || self.n_per_class[1] == 0 {
            return Err(Error::InvalidParam("per-class counts must be > 0".into()));
        }
        if self.n_features == 0 {
            return Err(Error::InvalidParam("n_features must be > 0".into()));
        }
        if !(self.covariance_scale > 0.0) {
            return Err(Error::InvalidParam("covariance_scale must be > 0".into()));
        }
        if !(0.0..0.5).contains(&self.band_correlation) {
            return Err(Error::InvalidParam(
                "band_correlation must lie in [0, 0.5)".into(),
            ));
        }
        if self.factor_strength < 0.0 {
            return Err(Error::InvalidParam("factor_strength must be >= 0".into()));
        }
        if self.class_mean_shift.len() != self.n_features {
            return Err(Error::DimMismatch {
                expected: self.n_features,
                got: self.class_mean_shift.len(),
            });
        }
        if let Some(d) = &self.external_drift {
            if d.len() != self.n_features {
                return Err(Error::DimMismatch {
                    expected: self.n_features,
                    got: d.len(),
                });
            }
        }
        Ok(())
    }
}

fn band_matrix(d: usize, b: f64) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        m.set(i, i, 1.0);
        if b != 0.0 && i + 1 < d {
            m.set(i, i + 1, b);
            m.set(i + 1, i, b);
        }
    }
    m
}

/// Draw a cohort from the spec. Deterministic and bit-identical for a fixed
/// seed; rows come out shuffled.
pub fn simulate_cohort(spec: &CohortSpec, seed: u64) -> Result<Dataset> {
    spec.validate()?;
    let d = spec.n_features;
    let r = spec.latent_dim;
    let key = RngKey::new(seed);

    // child(0): loading matrix, child(1)/child(2): class rows, child(3): shuffle
    let loadings = if r > 0 {
        let mut w_rng = key.child(0).rng();
        let mut w = rng::normal_vec(&mut w_rng, d * r);
        for v in &mut w {
            *v *= spec.factor_strength;
        }
        Some(Matrix::from_vec(d, r, w)?)
    } else {
        None
    };
    let band_chol = if spec.band_correlation != 0.0 {
        Some(cholesky(&band_matrix(d, spec.band_correlation))?)
    } else {
        None
    };

    let scale = spec.covariance_scale.sqrt();
    let n_total = spec.n_per_class[0] + spec.n_per_class[1];
    let mut features = Matrix::zeros(n_total, d);
    let mut labels = vec![0u8; n_total];
    let mut row_at = 0usize;
    for class in 0..2u8 {
        let mut class_rng = key.child(1 + class as u64).rng();
        let latent_shift = if r > 0 {
            class as f64 * spec.latent_class_shift / (r as f64).sqrt()
        } else {
            0.0
        };
        for _ in 0..spec.n_per_class[class as usize] {
            let u = rng::normal_vec(&mut class_rng, r);
            let eps = rng::normal_vec(&mut class_rng, d);
            let residual = match &band_chol {
                Some(l) => lower_matvec(l, &eps),
                None => eps,
            };
            let row = features.row_mut(row_at);
            for i in 0..d {
                let mut v = residual[i];
                if let Some(w) = &loadings {
                    let wrow = w.row(i);
                    for (wij, uj) in wrow.iter().zip(&u) {
                        v += wij * (uj + latent_shift);
                    }
                }
                v *= scale;
                v += class as f64 * spec.class_mean_shift[i];
                if let Some(drift) = &spec.external_drift {
                    v += drift[i];
                }
                row[i] = v;
            }
            labels[row_at] = class;
            row_at += 1;
        }
    }

    let perm = rng::shuffled_indices(key.child(3), n_total);
    let features = features.select_rows(&perm);
    let labels = perm.iter().map(|&i| labels[i]).collect();
    let names = (1..=d).map(|i| format!("f{i}")).collect();
    Dataset::new(features, labels, names, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds_from(rows: &[(Vec<f64>, u8)]) -> Dataset {
        let feats: Vec<Vec<f64>> = rows.iter().map(|(f, _)| f.clone()).collect();
        let labels: Vec<u8> = rows.iter().map(|(_, l)| *l).collect();
        let d = feats[0].len();
        let names = (1..=d).map(|i| format!("f{i}")).collect();
        Dataset::new(Matrix::from_rows(&feats).unwrap(), labels, names, false).unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn median_imputation_fills_gaps() {
        let ds = ds_from(&[
            (vec![1.0], 0),
            (vec![f64::NAN], 1),
            (vec![3.0], 0),
        ]);
        let out = impute_median(&ds).unwrap();
        assert_eq!(out.features().get(1, 0), 2.0);
        assert!(!out.has_missing());
    }

    #[test]
    fn imputation_is_identity_without_missing() {
        let ds = ds_from(&[(vec![1.0, 2.0], 0), (vec![3.0, 4.0], 1)]);
        let out = impute_median(&ds).unwrap();
        assert_eq!(out, ds);
    }

    #[test]
    fn odd_count_median_from_observed_values() {
        // median of {5, 9, 1} is 5
        let ds = ds_from(&[
            (vec![5.0], 0),
            (vec![f64::NAN], 0),
            (vec![f64::NAN], 1),
            (vec![9.0], 0),
            (vec![1.0], 1),
        ]);
        let out = impute_median(&ds).unwrap();
        assert_eq!(out.features().get(1, 0), 5.0);
        assert_eq!(out.features().get(2, 0), 5.0);
    }

    #[test]
    fn all_missing_feature_is_an_error() {
        let ds = ds_from(&[(vec![f64::NAN, 1.0], 0), (vec![f64::NAN, 2.0], 1)]);
        assert_eq!(
            feature_medians(&ds),
            Err(Error::AllMissing {
                feature: "f1".into()
            })
        );
    }

    #[test]
    fn zscore_fit_constant_feature_is_degenerate() {
        let ds = ds_from(&[(vec![0.0], 0), (vec![0.0], 1), (vec![0.0], 0)]);
        let stats = zscore_fit(&ds).unwrap();
        assert_eq!(stats.means[0], 0.0);
        assert!(stats.degenerate[0]);
        let z = zscore_apply(&ds, &stats).unwrap();
        assert!(z.features().as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zscore_fit_symmetric_pair() {
        let ds = ds_from(&[(vec![-1.0], 0), (vec![1.0], 1)]);
        let stats = zscore_fit(&ds).unwrap();
        assert_close(stats.means[0], 0.0, 1e-15);
        assert_close(stats.stds[0], 1.0, 1e-15);
    }

    #[test]
    fn zscore_fit_population_std() {
        // mean 5, population std sqrt(5)
        let ds = ds_from(&[(vec![2.0], 0), (vec![4.0], 1), (vec![6.0], 0), (vec![8.0], 1)]);
        let stats = zscore_fit(&ds).unwrap();
        assert_close(stats.means[0], 5.0, 1e-14);
        assert_close(stats.stds[0], 5.0f64.sqrt(), 1e-14);
    }

    #[test]
    fn zscore_apply_single_value() {
        let ds = ds_from(&[(vec![7.0], 0), (vec![7.0], 1)]);
        let stats = NormStats {
            means: vec![5.0],
            stds: vec![2.0],
            degenerate: vec![false],
        };
        let z = zscore_apply(&ds, &stats).unwrap();
        assert_eq!(z.features().get(0, 0), 1.0);
        assert!(z.is_normalized());
    }

    #[test]
    fn zscore_self_normalization() {
        let key = RngKey::new(5);
        let mut r = key.rng();
        let rows: Vec<(Vec<f64>, u8)> = (0..40)
            .map(|i| (rng::normal_vec(&mut r, 3), (i % 2) as u8))
            .collect();
        let ds = ds_from(&rows);
        let stats = zscore_fit(&ds).unwrap();
        let z = zscore_apply(&ds, &stats).unwrap();
        let means = z.features().col_means();
        let vars = z.features().col_variances(0);
        for j in 0..3 {
            assert_close(means[j], 0.0, 1e-9);
            assert_close(vars[j].sqrt(), 1.0, 1e-9);
        }
    }

    #[test]
    fn zscore_invert_roundtrip() {
        let ds = ds_from(&[(vec![2.0, -1.0], 0), (vec![4.0, 3.0], 1), (vec![9.0, 0.5], 0)]);
        let stats = zscore_fit(&ds).unwrap();
        let z = zscore_apply(&ds, &stats).unwrap();
        let back = zscore_invert(&z, &stats).unwrap();
        for (a, b) in back
            .features()
            .as_slice()
            .iter()
            .zip(ds.features().as_slice())
        {
            assert_close(*a, *b, 1e-12);
        }
    }

    #[test]
    fn split_floor_arithmetic_50_50() {
        let rows: Vec<(Vec<f64>, u8)> = (0..100)
            .map(|i| (vec![i as f64], (i % 2) as u8))
            .collect();
        let ds = ds_from(&rows);
        let (train, test) = split(&ds, 0.85, 1).unwrap();
        assert_eq!(train.n(), 84);
        assert_eq!(test.n(), 16);
        assert_eq!(train.label_counts(), [42, 42]);
    }

    #[test]
    fn split_is_deterministic() {
        let rows: Vec<(Vec<f64>, u8)> = (0..30)
            .map(|i| (vec![i as f64], (i % 3 == 0) as u8))
            .collect();
        let ds = ds_from(&rows);
        let (a_tr, a_te) = split(&ds, 0.85, 9).unwrap();
        let (b_tr, b_te) = split(&ds, 0.85, 9).unwrap();
        assert_eq!(a_tr, b_tr);
        assert_eq!(a_te, b_te);
    }

    #[test]
    fn split_is_a_partition() {
        let rows: Vec<(Vec<f64>, u8)> = (0..53)
            .map(|i| (vec![i as f64], (i % 4 == 0) as u8))
            .collect();
        let ds = ds_from(&rows);
        let (train, test) = split(&ds, 0.7, 3).unwrap();
        let mut seen: Vec<f64> = train
            .features()
            .as_slice()
            .iter()
            .chain(test.features().as_slice())
            .copied()
            .collect();
        seen.sort_unstable_by(f64::total_cmp);
        let expected: Vec<f64> = (0..53).map(|i| i as f64).collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn split_madb_shaped_counts() {
        let rows: Vec<(Vec<f64>, u8)> = (0..1275)
            .map(|i| (vec![i as f64], (i < 296) as u8))
            .collect();
        let ds = ds_from(&rows);
        let (train, _) = split(&ds, 0.85, 42).unwrap();
        assert_eq!(train.n(), 1083); // floor(979*.85) + floor(296*.85) = 832 + 251
    }

    #[test]
    fn split_rejects_tiny_class() {
        let ds = ds_from(&[(vec![0.0], 0), (vec![1.0], 0), (vec![2.0], 1)]);
        assert_eq!(
            split(&ds, 0.5, 0),
            Err(Error::SmallClass { label: 1, count: 1 })
        );
    }

    #[test]
    fn simulate_default_shape() {
        let spec = CohortSpec::primary_default();
        let ds = simulate_cohort(&spec, 42).unwrap();
        assert_eq!(ds.n(), 1275);
        assert_eq!(ds.dim(), 27);
        assert_eq!(ds.label_counts(), [979, 296]);
        assert!(!ds.has_missing());
    }

    #[test]
    fn simulate_is_bit_identical() {
        let spec = CohortSpec::external_default();
        let a = simulate_cohort(&spec, 7).unwrap();
        let b = simulate_cohort(&spec, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_drift_equals_no_drift() {
        let mut spec = CohortSpec::primary_default();
        let a = simulate_cohort(&spec, 13).unwrap();
        spec.external_drift = Some(vec![0.0; 27]);
        let b = simulate_cohort(&spec, 13).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ambient_shift_separates_class_means() {
        let spec = CohortSpec {
            n_per_class: [10, 10],
            n_features: 2,
            class_mean_shift: vec![3.0, 3.0],
            covariance_scale: 1.0,
            band_correlation: 0.3,
            latent_dim: 0,
            factor_strength: 0.0,
            latent_class_shift: 0.0,
            external_drift: None,
        };
        let ds = simulate_cohort(&spec, 21).unwrap();
        assert_eq!(ds.n(), 20);
        let c0 = ds.class_features(0);
        let c1 = ds.class_features(1);
        for j in 0..2 {
            let (m0, m1) = (c0.col_means()[j], c1.col_means()[j]);
            let (v0, v1) = (c0.col_variances(1)[j], c1.col_variances(1)[j]);
            let t = (m1 - m0) / (v0 / 10.0 + v1 / 10.0).sqrt();
            assert!(t > 5.0, "feature {j}: t = {t}");
        }
    }

    #[test]
    fn latent_shift_separates_classes() {
        let spec = CohortSpec::primary_default();
        let ds = simulate_cohort(&spec, 42).unwrap();
        let c0 = ds.class_features(0);
        let c1 = ds.class_features(1);
        // overall mean distance between class centroids is well away from 0
        let gap: f64 = c0
            .col_means()
            .iter()
            .zip(c1.col_means())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(gap > 1.0, "centroid gap {gap}");
    }
}
