//! Synthetic data generation: extended SMOTE and the KDE-KNN rejection
//! pipeline.
//!
//! Both methods produce a fully synthetic, per-class-counted batch from a
//! normalized training cohort. KDE-KNN runs five steps: fit a KNN validator
//! on the whole training set, partition by class, fit one Gaussian KDE per
//! class, sample candidates from each class KDE, and keep a candidate only
//! if the validator classifies it as the generating class — repeating the
//! sample/validate steps until the per-class targets are met. Candidates
//! carry sequence numbers that name their RNG stream, so acceptance
//! bookkeeping is identical for any batch size or worker schedule.

use alloc::format;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::Error;
use crate::kde::{BandwidthRule, KdeModel};
use crate::knn::{KdTree, KnnModel};
use crate::matrix::Matrix;
use crate::rng::{self, RngKey};
use crate::Result;

/// Generation method tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Smote,
    /// KDE sampling with the KNN validation step disabled.
    Kde,
    KdeKnn,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Smote => "smote",
            Method::Kde => "kde",
            Method::KdeKnn => "kde-knn",
        }
    }

    fn stream_tag(self) -> u64 {
        match self {
            Method::Smote => 1,
            Method::Kde => 2,
            Method::KdeKnn => 3,
        }
    }
}

/// Generator configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    /// Target counts per class (class 0, class 1).
    pub per_class_counts: [usize; 2],
    /// Neighbor count of the KNN validator.
    pub knn_k: usize,
    pub bandwidth_rule: BandwidthRule,
    pub regularization: f64,
    /// Neighbor count for SMOTE interpolation partners.
    pub smote_k: usize,
    /// Cap on total KDE draws across both classes.
    pub max_attempts: usize,
    pub seed: u64,
}

impl GenConfig {
    /// Defaults: 540/540 targets, k = 5 validator and SMOTE neighbors,
    /// Scott bandwidth with 1e-6 regularization, draw budget 1000× target.
    pub fn new(seed: u64) -> Self {
        GenConfig {
            per_class_counts: [540, 540],
            knn_k: 5,
            bandwidth_rule: BandwidthRule::Scott,
            regularization: 1e-6,
            smote_k: 5,
            max_attempts: 1000 * 1080,
            seed,
        }
    }

    /// Same defaults with custom per-class targets (budget rescaled).
    pub fn with_counts(seed: u64, counts: [usize; 2]) -> Self {
        GenConfig {
            per_class_counts: counts,
            max_attempts: 1000 * (counts[0] + counts[1]),
            ..GenConfig::new(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.per_class_counts[0] == 0 || self.per_class_counts[1] == 0 {
            return Err(Error::InvalidParam("per-class counts must be > 0".into()));
        }
        if self.knn_k == 0 || self.smote_k == 0 {
            return Err(Error::InvalidParam("neighbor counts must be > 0".into()));
        }
        let total = self.per_class_counts[0] + self.per_class_counts[1];
        if self.max_attempts < total {
            return Err(Error::InvalidParam(format!(
                "max_attempts ({}) must cover the total target ({total})",
                self.max_attempts
            )));
        }
        if self.regularization < 0.0 {
            return Err(Error::InvalidParam(
                "regularization must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// A generated batch plus its bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticBatch {
    /// Synthetic rows in the training cohort's (normalized) feature space.
    pub data: Dataset,
    pub method: Method,
    pub accepted_per_class: [usize; 2],
    pub attempted_per_class: [usize; 2],
    pub seed: u64,
}

impl SyntheticBatch {
    pub fn acceptance_rate_per_class(&self) -> [f64; 2] {
        let rate = |a: usize, t: usize| if t == 0 { 0.0 } else { a as f64 / t as f64 };
        [
            rate(self.accepted_per_class[0], self.attempted_per_class[0]),
            rate(self.accepted_per_class[1], self.attempted_per_class[1]),
        ]
    }
}

/// How one SMOTE sample was built: base point, neighbor, interpolation
/// weight. Kept so tests can replay the generation trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoteTrace {
    pub base: usize,
    pub neighbor: usize,
    pub lambda: f64,
}

fn smote_generate_impl(
    class_points: &Matrix,
    k: usize,
    count: usize,
    key: RngKey,
    lambda_override: Option<f64>,
) -> Result<(Matrix, Vec<SmoteTrace>)> {
    let m = class_points.rows();
    if m <= k {
        return Err(Error::InsufficientData(format!(
            "SMOTE with k={k} needs at least {} class points, got {m}",
            k + 1
        )));
    }
    // k same-class neighbors of every point, self excluded
    let tree = KdTree::build(class_points);
    let mut neighbor_table = Vec::with_capacity(m);
    for p in 0..m {
        let found = tree.kneighbors(class_points, class_points.row(p), k + 1)?;
        let nbrs: Vec<usize> = found
            .into_iter()
            .map(|(i, _)| i)
            .filter(|&i| i != p)
            .take(k)
            .collect();
        neighbor_table.push(nbrs);
    }

    let d = class_points.cols();
    let mut out = Matrix::zeros(count, d);
    let mut traces = Vec::with_capacity(count);
    for r in 0..count {
        let mut row_rng = key.child(r as u64).rng();
        let base = rng::uniform_index(&mut row_rng, m);
        let neighbor = neighbor_table[base][rng::uniform_index(&mut row_rng, k)];
        let lambda = lambda_override.unwrap_or_else(|| rng::uniform_unit(&mut row_rng));
        let p = class_points.row(base);
        let q = class_points.row(neighbor);
        let dest = out.row_mut(r);
        for j in 0..d {
            dest[j] = p[j] + lambda * (q[j] - p[j]);
        }
        traces.push(SmoteTrace {
            base,
            neighbor,
            lambda,
        });
    }
    Ok((out, traces))
}

/// SMOTE within one class: each synthetic row interpolates a uniformly
/// chosen class point toward one of its `k` nearest same-class neighbors
/// with weight `λ ~ U[0,1]`. Row `r` draws from `key.child(r)`.
pub fn smote_generate(
    class_points: &Matrix,
    k: usize,
    count: usize,
    key: RngKey,
) -> Result<(Matrix, Vec<SmoteTrace>)> {
    smote_generate_impl(class_points, k, count, key, None)
}

#[cfg(test)]
pub(crate) fn smote_generate_lambda0(
    class_points: &Matrix,
    k: usize,
    count: usize,
    key: RngKey,
) -> Result<(Matrix, Vec<SmoteTrace>)> {
    smote_generate_impl(class_points, k, count, key, Some(0.0))
}

/// Fully synthetic SMOTE batch covering both classes independently.
pub fn smote_full_synthetic(train: &Dataset, config: &GenConfig) -> Result<SyntheticBatch> {
    config.validate()?;
    let root = RngKey::new(config.seed).child(Method::Smote.stream_tag());
    let counts = config.per_class_counts;
    let mut parts = Vec::with_capacity(2);
    for class in 0..2u8 {
        let points = train.class_features(class);
        let (rows, _) = smote_generate(
            &points,
            config.smote_k,
            counts[class as usize],
            root.child(class as u64),
        )?;
        parts.push(rows);
    }
    let data = assemble(train, parts, counts)?;
    Ok(SyntheticBatch {
        data,
        method: Method::Smote,
        accepted_per_class: counts,
        attempted_per_class: counts,
        seed: config.seed,
    })
}

/// The KDE-KNN pipeline (or plain KDE when `validate` is false).
fn kde_pipeline(train: &Dataset, config: &GenConfig, method: Method) -> Result<SyntheticBatch> {
    config.validate()?;
    if !train.is_normalized() {
        return Err(Error::InvalidParam(
            "KDE generation requires a z-scored training set".into(),
        ));
    }
    let counts = train.label_counts();
    for class in 0..2u8 {
        if counts[class as usize] < 2 {
            return Err(Error::SmallClass {
                label: class,
                count: counts[class as usize],
            });
        }
    }
    let validate = matches!(method, Method::KdeKnn);
    // step 1: validator over the full (imbalanced) training set
    let validator = if validate {
        Some(KnnModel::fit(
            train.features().clone(),
            train.labels().to_vec(),
            config.knn_k,
        )?)
    } else {
        None
    };
    // steps 2-3: class partitions and per-class KDEs
    let kdes = [
        KdeModel::fit(
            &train.class_features(0),
            config.bandwidth_rule,
            config.regularization,
        )?,
        KdeModel::fit(
            &train.class_features(1),
            config.bandwidth_rule,
            config.regularization,
        )?,
    ];

    // steps 4-5: draw candidates in batches, validate, accept in sequence
    // order until each class reaches its target
    let root = RngKey::new(config.seed).child(method.stream_tag());
    let targets = config.per_class_counts;
    let mut accepted_rows: [Vec<Vec<f64>>; 2] = [Vec::new(), Vec::new()];
    let mut attempted = [0usize; 2];
    let mut total_attempted = 0usize;
    for class in 0..2usize {
        let class_key = root.child(class as u64);
        let kde = &kdes[class];
        let mut next_seq = 0u64;
        while accepted_rows[class].len() < targets[class] {
            let remaining = targets[class] - accepted_rows[class].len();
            let budget = config.max_attempts - total_attempted;
            if budget == 0 {
                let mut accepted = [0; 2];
                accepted[0] = accepted_rows[0].len();
                accepted[1] = accepted_rows[1].len();
                return Err(Error::GenerationStalled {
                    accepted,
                    attempted,
                });
            }
            let batch = (4 * remaining).min(budget);
            for _ in 0..batch {
                if accepted_rows[class].len() >= targets[class] {
                    break;
                }
                let candidate = kde.sample_row(class_key.child(next_seq));
                next_seq += 1;
                attempted[class] += 1;
                total_attempted += 1;
                let keep = match &validator {
                    Some(knn) => knn.predict(&candidate)? == class as u8,
                    None => true,
                };
                if keep {
                    accepted_rows[class].push(candidate);
                }
            }
        }
    }

    let parts = [
        Matrix::from_rows(&accepted_rows[0])?,
        Matrix::from_rows(&accepted_rows[1])?,
    ];
    let data = assemble(train, parts.into_iter().collect(), targets)?;
    Ok(SyntheticBatch {
        data,
        method,
        accepted_per_class: targets,
        attempted_per_class: attempted,
        seed: config.seed,
    })
}

/// KDE-KNN generation: class-conditional KDE sampling with KNN validation.
pub fn kde_knn_generate(train: &Dataset, config: &GenConfig) -> Result<SyntheticBatch> {
    kde_pipeline(train, config, Method::KdeKnn)
}

/// Plain KDE generation: the same pipeline with validation disabled, so
/// every draw is accepted.
pub fn kde_generate(train: &Dataset, config: &GenConfig) -> Result<SyntheticBatch> {
    kde_pipeline(train, config, Method::Kde)
}

/// Run the selected generation method.
pub fn generate(train: &Dataset, method: Method, config: &GenConfig) -> Result<SyntheticBatch> {
    match method {
        Method::Smote => smote_full_synthetic(train, config),
        Method::Kde => kde_generate(train, config),
        Method::KdeKnn => kde_knn_generate(train, config),
    }
}

fn assemble(train: &Dataset, parts: Vec<Matrix>, counts: [usize; 2]) -> Result<Dataset> {
    let d = train.dim();
    let total = counts[0] + counts[1];
    let mut data = Vec::with_capacity(total * d);
    for part in &parts {
        data.extend_from_slice(part.as_slice());
    }
    let mut labels = Vec::with_capacity(total);
    labels.extend(core::iter::repeat(0u8).take(counts[0]));
    labels.extend(core::iter::repeat(1u8).take(counts[1]));
    Dataset::new(
        Matrix::from_vec(total, d, data)?,
        labels,
        train.feature_names().to_vec(),
        train.is_normalized(),
    )
}
