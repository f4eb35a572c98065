//! Shared data-preparation steps for the commands: sourcing the cohorts
//! (CSV or simulator) and the split → impute → normalize chain. Medians and
//! z-score statistics always come from the training partition alone and are
//! applied unchanged to test and external sets.

use std::path::Path;

use privsynth::dataset::{
    feature_medians, impute_with, simulate_cohort, split, zscore_apply, zscore_fit, Dataset,
    NormStats,
};

use crate::config::RunConfig;
use crate::csvio;
use crate::error::Result;

/// The primary cohort: `--input` CSV when given, simulator otherwise.
pub fn primary_cohort(config: &RunConfig, input: Option<&Path>) -> Result<Dataset> {
    match input {
        Some(path) => csvio::read_dataset(path, &config.label_column),
        None => Ok(simulate_cohort(&config.cohort.primary_spec(), config.seed)?),
    }
}

/// The external cohort: CSV when given, drifted simulator otherwise.
pub fn external_cohort(config: &RunConfig, input: Option<&Path>) -> Result<Dataset> {
    match input {
        Some(path) => csvio::read_dataset(path, &config.label_column),
        None => {
            let spec = config
                .external
                .external_spec(&config.cohort.primary_spec());
            Ok(simulate_cohort(&spec, config.seed)?)
        }
    }
}

/// Normalized train/test/external triple plus the training statistics.
pub struct Prepared {
    pub train: Dataset,
    pub test: Dataset,
    pub external: Dataset,
    pub stats: NormStats,
}

/// Split the primary cohort, then impute and z-score everything with
/// training-partition statistics.
pub fn prepare(
    primary: &Dataset,
    external: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<Prepared> {
    let (train_raw, test_raw) = split(primary, train_fraction, seed)?;
    let medians = feature_medians(&train_raw)?;
    let train_imp = impute_with(&train_raw, &medians)?;
    let test_imp = impute_with(&test_raw, &medians)?;
    let external_imp = impute_with(external, &medians)?;
    let stats = zscore_fit(&train_imp)?;
    Ok(Prepared {
        train: zscore_apply(&train_imp, &stats)?,
        test: zscore_apply(&test_imp, &stats)?,
        external: zscore_apply(&external_imp, &stats)?,
        stats,
    })
}

/// Impute a whole dataset with its own medians and z-score it — the path
/// for generators that consume an entire input cohort as seed data.
pub fn normalize_whole(ds: &Dataset) -> Result<(Dataset, NormStats)> {
    let medians = feature_medians(ds)?;
    let imputed = impute_with(ds, &medians)?;
    let stats = zscore_fit(&imputed)?;
    Ok((zscore_apply(&imputed, &stats)?, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prepare_normalizes_train_to_unit_scale() {
        let config = RunConfig::default();
        let mut small = config.clone();
        small.cohort.n_class0 = 60;
        small.cohort.n_class1 = 40;
        small.cohort.n_features = 4;
        let primary = primary_cohort(&small, None).unwrap();
        let external = {
            let spec = small.external.external_spec(&small.cohort.primary_spec());
            let mut spec = spec;
            spec.n_per_class = [30, 30];
            simulate_cohort(&spec, small.seed).unwrap()
        };
        let prepared = prepare(&primary, &external, 0.8, 7).unwrap();
        assert!(prepared.train.is_normalized());
        assert!(prepared.external.is_normalized());
        let means = prepared.train.features().col_means();
        for m in means {
            assert!(m.abs() < 1e-9);
        }
        // external cohort is drifted, so its mean is away from zero
        let ext_means = prepared.external.features().col_means();
        assert!(ext_means.iter().any(|m| m.abs() > 0.05));
        assert_eq!(prepared.stats.means.len(), 4);
    }
}
