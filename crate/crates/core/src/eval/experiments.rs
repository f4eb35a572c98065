//! The three utility-evaluation protocols.
//!
//! 1. Real data only: train each classifier on the real training partition,
//!    score the held-out test set and the external cohort, repeat per seed.
//! 2. Train on synthetic, test on real: per generation method, build one
//!    synthetic batch per seed, train each classifier on each batch, score
//!    the same real test/external sets.
//! 3. Real/synthetic mixing: hold the training-set size fixed and sweep the
//!    real share over given percentages, filling the remainder from one
//!    KDE-KNN batch; repeats reseed only the subsampling of mixed rows, so
//!    the all-real and all-synthetic compositions have zero mixing variance.
//!
//! Every cell derives its inputs from `(seed, cell coordinates)` and cells
//! run under an [`Executor`], so reports are identical for any worker count.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;


use crate::dataset::Dataset;
use crate::error::Error;
use crate::exec::Executor;
use crate::generate::{generate, GenConfig, Method, SyntheticBatch};
use crate::rng::{self, RngKey};
use crate::Result;

use super::{evaluate_auc, train, ClassifierSpec};

/// One line of an experiment report: a (method, model, mix) combination with
/// its per-repeat AUCs and their moments.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Generation method; `None` for real-data rows (experiments 1 and 3).
    pub method: Option<Method>,
    pub model: &'static str,
    /// Real-data percentage of the training mix (experiment 3 only).
    pub real_pct: Option<u32>,
    pub test_aucs: Vec<f64>,
    pub external_aucs: Vec<f64>,
    pub test_mean: f64,
    pub test_var: f64,
    pub external_mean: f64,
    pub external_var: f64,
}

/// Result of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub experiment: u8,
    pub seeds: Vec<u64>,
    pub rows: Vec<ReportRow>,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn pop_var(xs: &[f64]) -> f64 {
    // identical repeats must report an exact zero, not a rounding residue
    if xs.windows(2).all(|w| w[0] == w[1]) {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

fn row_from(
    method: Option<Method>,
    model: &'static str,
    real_pct: Option<u32>,
    test_aucs: Vec<f64>,
    external_aucs: Vec<f64>,
) -> ReportRow {
    ReportRow {
        method,
        model,
        real_pct,
        test_mean: mean(&test_aucs),
        test_var: pop_var(&test_aucs),
        external_mean: mean(&external_aucs),
        external_var: pop_var(&external_aucs),
        test_aucs,
        external_aucs,
    }
}

fn check_schemas(train: &Dataset, test: &Dataset, external: &Dataset) -> Result<()> {
    for other in [test, external] {
        if other.dim() != train.dim() {
            return Err(Error::DimMismatch {
                expected: train.dim(),
                got: other.dim(),
            });
        }
    }
    if !(train.is_normalized() && test.is_normalized() && external.is_normalized()) {
        return Err(Error::InvalidParam(
            "experiments require z-scored train/test/external sets".into(),
        ));
    }
    Ok(())
}

/// Experiment 1: real data only. One cell per (classifier, seed).
pub fn run_experiment1<E: Executor>(
    train_set: &Dataset,
    test_set: &Dataset,
    external_set: &Dataset,
    specs: &[ClassifierSpec],
    seeds: &[u64],
    exec: &E,
) -> Result<ExperimentReport> {
    check_schemas(train_set, test_set, external_set)?;
    if specs.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidParam("specs and seeds must be non-empty".into()));
    }
    let n_seeds = seeds.len();
    let cells: Vec<Result<(f64, f64)>> =
        exec.map_indexed(specs.len() * n_seeds, &|i| {
            let spec = &specs[i / n_seeds];
            let seed = seeds[i % n_seeds];
            let model = train(spec, train_set, seed)?;
            Ok((
                evaluate_auc(&model, test_set)?,
                evaluate_auc(&model, external_set)?,
            ))
        });
    let mut rows = Vec::with_capacity(specs.len());
    for (s, spec) in specs.iter().enumerate() {
        let mut test_aucs = Vec::with_capacity(n_seeds);
        let mut external_aucs = Vec::with_capacity(n_seeds);
        for j in 0..n_seeds {
            let (t, e) = cells[s * n_seeds + j].clone()?;
            test_aucs.push(t);
            external_aucs.push(e);
        }
        rows.push(row_from(None, spec.name(), None, test_aucs, external_aucs));
    }
    Ok(ExperimentReport {
        experiment: 1,
        seeds: seeds.to_vec(),
        rows,
    })
}

/// Experiment 2: train on synthetic, test on real. One batch per
/// (method, seed); one cell per (method, classifier, seed).
#[allow(clippy::too_many_arguments)]
pub fn run_experiment2<E: Executor>(
    train_set: &Dataset,
    test_set: &Dataset,
    external_set: &Dataset,
    methods: &[Method],
    specs: &[ClassifierSpec],
    gen_config: &GenConfig,
    seeds: &[u64],
    exec: &E,
) -> Result<ExperimentReport> {
    check_schemas(train_set, test_set, external_set)?;
    if methods.is_empty() || specs.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidParam(
            "methods, specs, and seeds must be non-empty".into(),
        ));
    }
    let n_seeds = seeds.len();
    let batches: Vec<Result<SyntheticBatch>> =
        exec.map_indexed(methods.len() * n_seeds, &|i| {
            let method = methods[i / n_seeds];
            let config = GenConfig {
                seed: seeds[i % n_seeds],
                ..gen_config.clone()
            };
            generate(train_set, method, &config)
        });
    let batches: Vec<SyntheticBatch> = batches.into_iter().collect::<Result<_>>()?;

    let n_specs = specs.len();
    let cells: Vec<Result<(f64, f64)>> =
        exec.map_indexed(methods.len() * n_specs * n_seeds, &|i| {
            let b = i % n_seeds;
            let s = (i / n_seeds) % n_specs;
            let m = i / (n_seeds * n_specs);
            let batch = &batches[m * n_seeds + b];
            let model = train(&specs[s], &batch.data, seeds[b])?;
            Ok((
                evaluate_auc(&model, test_set)?,
                evaluate_auc(&model, external_set)?,
            ))
        });
    let mut rows = Vec::with_capacity(methods.len() * n_specs);
    for (m, method) in methods.iter().enumerate() {
        for (s, spec) in specs.iter().enumerate() {
            let mut test_aucs = Vec::with_capacity(n_seeds);
            let mut external_aucs = Vec::with_capacity(n_seeds);
            for b in 0..n_seeds {
                let (t, e) = cells[(m * n_specs + s) * n_seeds + b].clone()?;
                test_aucs.push(t);
                external_aucs.push(e);
            }
            rows.push(row_from(
                Some(*method),
                spec.name(),
                None,
                test_aucs,
                external_aucs,
            ));
        }
    }
    Ok(ExperimentReport {
        experiment: 2,
        seeds: seeds.to_vec(),
        rows,
    })
}

/// The training mix for one experiment-3 cell: a stratified without-
/// replacement subsample of the real training set plus enough rows from the
/// synthetic batch to restore the original training size (capped by the
/// batch size). The all-real mix is the training set itself; the all-
/// synthetic mix derives its subsample from the master seed alone so that
/// repeats share one composition.
fn mixed_training_set(
    train_set: &Dataset,
    batch: &SyntheticBatch,
    real_pct: u32,
    repeat_seed: u64,
    master_seed: u64,
) -> Result<Dataset> {
    if real_pct > 100 {
        return Err(Error::InvalidParam(format!(
            "real percentage must be <= 100, got {real_pct}"
        )));
    }
    if real_pct == 100 {
        return Ok(train_set.clone());
    }
    let key = if real_pct == 0 {
        RngKey::new(master_seed)
    } else {
        RngKey::new(repeat_seed)
    }
    .child(0xE3)
    .child(real_pct as u64);

    let fraction = real_pct as f64 / 100.0;
    let mut real_idx = Vec::new();
    for class in 0..2u8 {
        let members = train_set.class_indices(class);
        let take = (fraction * members.len() as f64).floor() as usize;
        let order = rng::shuffled_indices(key.child(10 + class as u64), members.len());
        real_idx.extend(order[..take].iter().map(|&o| members[o]));
    }
    real_idx.sort_unstable();

    let n_syn = (train_set.n() - real_idx.len()).min(batch.data.n());
    let order = rng::shuffled_indices(key.child(20), batch.data.n());
    let mut syn_idx: Vec<usize> = order[..n_syn].to_vec();
    syn_idx.sort_unstable();

    if real_idx.is_empty() {
        return Ok(batch.data.select(&syn_idx));
    }
    train_set.select(&real_idx).concat(&batch.data.select(&syn_idx))
}

/// Experiment 3: real/synthetic mixing with one classifier. One cell per
/// (fraction, seed); the KDE-KNN batch is generated once from the config
/// seed.
#[allow(clippy::too_many_arguments)]
pub fn run_experiment3<E: Executor>(
    train_set: &Dataset,
    test_set: &Dataset,
    external_set: &Dataset,
    fractions: &[u32],
    spec: &ClassifierSpec,
    gen_config: &GenConfig,
    seeds: &[u64],
    exec: &E,
) -> Result<ExperimentReport> {
    check_schemas(train_set, test_set, external_set)?;
    if fractions.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidParam(
            "fractions and seeds must be non-empty".into(),
        ));
    }
    let batch = generate(train_set, Method::KdeKnn, gen_config)?;
    let n_seeds = seeds.len();
    let cells: Vec<Result<(f64, f64)>> =
        exec.map_indexed(fractions.len() * n_seeds, &|i| {
            let pct = fractions[i / n_seeds];
            let seed = seeds[i % n_seeds];
            let mix = mixed_training_set(train_set, &batch, pct, seed, gen_config.seed)?;
            let model = train(spec, &mix, seed)?;
            Ok((
                evaluate_auc(&model, test_set)?,
                evaluate_auc(&model, external_set)?,
            ))
        });
    let mut rows = Vec::with_capacity(fractions.len());
    for (f, pct) in fractions.iter().enumerate() {
        let mut test_aucs = Vec::with_capacity(n_seeds);
        let mut external_aucs = Vec::with_capacity(n_seeds);
        for j in 0..n_seeds {
            let (t, e) = cells[f * n_seeds + j].clone()?;
            test_aucs.push(t);
            external_aucs.push(e);
        }
        rows.push(row_from(
            Some(Method::KdeKnn),
            spec.name(),
            Some(*pct),
            test_aucs,
            external_aucs,
        ));
    }
    Ok(ExperimentReport {
        experiment: 3,
        seeds: seeds.to_vec(),
        rows,
    })
}
