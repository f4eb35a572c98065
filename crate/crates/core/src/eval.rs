//! Utility evaluation: the three built-in classifiers, ranking-based AUC,
//! and the experiment protocols that measure synthetic-data utility.
//!
//! Classifier hyperparameters are fixed to the tuned values the evaluation
//! protocol calls for: the random forest runs 500 trees without bootstrap
//! (depth ≤ 20, 5 candidate features per split, leaf ≥ 5, split ≥ 12), and
//! both SVMs use C = 1 with the "scale" RBF gamma default
//! `1 / (d · mean feature variance)`.

pub mod experiments;
mod forest;
mod svm;

pub use experiments::{
    run_experiment1, run_experiment2, run_experiment3, ExperimentReport, ReportRow,
};
pub use forest::{Forest, RfParams};
pub use svm::{SvmKernel, SvmModel, SvmParams};

use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::Error;
use crate::Result;

/// Which classifier, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierSpec {
    RandomForest(RfParams),
    SvmLinear(SvmParams),
    SvmRbf(SvmParams),
}

impl ClassifierSpec {
    pub fn random_forest() -> Self {
        ClassifierSpec::RandomForest(RfParams::default())
    }

    pub fn svm_linear() -> Self {
        ClassifierSpec::SvmLinear(SvmParams::default())
    }

    pub fn svm_rbf() -> Self {
        ClassifierSpec::SvmRbf(SvmParams::default())
    }

    /// The trio the evaluation protocol compares.
    pub fn all_default() -> Vec<ClassifierSpec> {
        alloc::vec![
            ClassifierSpec::random_forest(),
            ClassifierSpec::svm_linear(),
            ClassifierSpec::svm_rbf(),
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassifierSpec::RandomForest(_) => "random-forest",
            ClassifierSpec::SvmLinear(_) => "svm-linear",
            ClassifierSpec::SvmRbf(_) => "svm-rbf",
        }
    }
}

/// A fitted classifier. Scoring is read-only.
#[derive(Debug, Clone)]
pub enum TrainedModel {
    Forest(Forest),
    Svm(SvmModel),
}

/// Train a classifier on a normalized dataset. Deterministic for a fixed
/// seed (only the forest consumes randomness, for per-split feature
/// subsampling).
pub fn train(spec: &ClassifierSpec, data: &Dataset, seed: u64) -> Result<TrainedModel> {
    let counts = data.label_counts();
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::SingleClass);
    }
    if !data.features().is_finite() {
        return Err(Error::InvalidParam(
            "training features must be finite".into(),
        ));
    }
    match spec {
        ClassifierSpec::RandomForest(params) => Ok(TrainedModel::Forest(forest::train_forest(
            params,
            data.features(),
            data.labels(),
            seed,
        )?)),
        ClassifierSpec::SvmLinear(params) => Ok(TrainedModel::Svm(svm::train_svm(
            params,
            SvmKernel::Linear,
            data.features(),
            data.labels(),
        )?)),
        ClassifierSpec::SvmRbf(params) => {
            let gamma = params
                .gamma
                .unwrap_or_else(|| svm::scale_gamma(data.features()));
            Ok(TrainedModel::Svm(svm::train_svm(
                params,
                SvmKernel::Rbf { gamma },
                data.features(),
                data.labels(),
            )?))
        }
    }
}

/// Continuous score for one feature vector: the forest's class-1 vote
/// fraction, or the SVM's signed margin. Higher means more class-1-like.
pub fn predict_score(model: &TrainedModel, x: &[f64]) -> Result<f64> {
    match model {
        TrainedModel::Forest(f) => f.vote_fraction(x),
        TrainedModel::Svm(s) => s.decision_value(x),
    }
}

/// Scores for every row of a dataset.
pub fn score_dataset(model: &TrainedModel, data: &Dataset) -> Result<Vec<f64>> {
    data.features()
        .iter_rows()
        .map(|row| predict_score(model, row))
        .collect()
}

/// ROC AUC via the Mann-Whitney statistic with ties counted half:
/// `(#{(pos, neg): s_pos > s_neg} + ½·#ties) / (n_pos · n_neg)`.
pub fn auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::DimMismatch {
            expected: labels.len(),
            got: scores.len(),
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidParam("scores must be finite".into()));
    }
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    // average ranks over ties, then the rank-sum form of U
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum_pos = 0.0f64;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks are 1-based; tied group [i, j] shares the mean rank
        let shared = (i + 1 + j + 1) as f64 / 2.0;
        for &at in &order[i..=j] {
            if labels[at] == 1 {
                rank_sum_pos += shared;
            }
        }
        i = j + 1;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// AUC of a trained model on a labeled dataset.
pub fn evaluate_auc(model: &TrainedModel, data: &Dataset) -> Result<f64> {
    let scores = score_dataset(model, data)?;
    auc(&scores, data.labels())
}
