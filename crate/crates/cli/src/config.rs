//! Run configuration: a sectioned TOML file with every key overridable from
//! the command line (flags win).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use privsynth::dataset::CohortSpec;
use privsynth::eval::ClassifierSpec;
use privsynth::generate::{GenConfig, Method};
use privsynth::kde::BandwidthRule;
use privsynth::privacy::DcrDirection;

use crate::error::{CliError, Result};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "PRIVSYNTH_OUT";

fn default_seed() -> u64 {
    42
}
fn default_threads() -> usize {
    1
}
fn default_label_column() -> String {
    "label".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    /// Output directory; flag > config > $PRIVSYNTH_OUT > "privsynth-out".
    pub out_dir: Option<PathBuf>,
    pub threads: usize,
    pub format: OutputFormat,
    pub label_column: String,
    pub cohort: CohortSection,
    pub external: ExternalSection,
    pub generate: GenerateSection,
    pub experiment: ExperimentSection,
    pub privacy: PrivacySection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: default_seed(),
            out_dir: None,
            threads: default_threads(),
            format: OutputFormat::Table,
            label_column: default_label_column(),
            cohort: CohortSection::default(),
            external: ExternalSection::default(),
            generate: GenerateSection::default(),
            experiment: ExperimentSection::default(),
            privacy: PrivacySection::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

/// Primary-cohort simulator parameters (defaults mirror the 979/296 × 27
/// training database shape).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CohortSection {
    pub n_class0: usize,
    pub n_class1: usize,
    pub n_features: usize,
    pub class_mean_shift: Vec<f64>,
    pub covariance_scale: f64,
    pub band_correlation: f64,
    pub latent_dim: usize,
    pub factor_strength: f64,
    pub latent_class_shift: f64,
}

impl Default for CohortSection {
    fn default() -> Self {
        let spec = CohortSpec::primary_default();
        CohortSection {
            n_class0: spec.n_per_class[0],
            n_class1: spec.n_per_class[1],
            n_features: spec.n_features,
            class_mean_shift: Vec::new(),
            covariance_scale: spec.covariance_scale,
            band_correlation: spec.band_correlation,
            latent_dim: spec.latent_dim,
            factor_strength: spec.factor_strength,
            latent_class_shift: spec.latent_class_shift,
        }
    }
}

impl CohortSection {
    pub fn primary_spec(&self) -> CohortSpec {
        let shift = if self.class_mean_shift.is_empty() {
            vec![0.0; self.n_features]
        } else {
            self.class_mean_shift.clone()
        };
        CohortSpec {
            n_per_class: [self.n_class0, self.n_class1],
            n_features: self.n_features,
            class_mean_shift: shift,
            covariance_scale: self.covariance_scale,
            band_correlation: self.band_correlation,
            latent_dim: self.latent_dim,
            factor_strength: self.factor_strength,
            latent_class_shift: self.latent_class_shift,
            external_drift: None,
        }
    }
}

/// External-cohort overrides: sizes and the per-feature drift.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExternalSection {
    pub n_class0: usize,
    pub n_class1: usize,
    /// Scalar drift broadcast to every feature…
    pub drift: f64,
    /// …unless a full vector is given.
    pub drift_vector: Vec<f64>,
}

impl Default for ExternalSection {
    fn default() -> Self {
        ExternalSection {
            n_class0: 1014,
            n_class1: 1014,
            drift: 0.25,
            drift_vector: Vec::new(),
        }
    }
}

impl ExternalSection {
    pub fn external_spec(&self, primary: &CohortSpec) -> CohortSpec {
        let drift = if self.drift_vector.is_empty() {
            vec![self.drift; primary.n_features]
        } else {
            self.drift_vector.clone()
        };
        CohortSpec {
            n_per_class: [self.n_class0, self.n_class1],
            external_drift: Some(drift),
            ..primary.clone()
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenerateSection {
    pub method: MethodName,
    pub per_class0: usize,
    pub per_class1: usize,
    pub knn_k: usize,
    pub smote_k: usize,
    pub bandwidth: BandwidthName,
    pub regularization: f64,
    /// 0 selects the default budget of 1000 × total target.
    pub max_attempts: usize,
    /// Keep outputs in z-scored units instead of inverting to raw units.
    pub normalized_output: bool,
}

impl Default for GenerateSection {
    fn default() -> Self {
        GenerateSection {
            method: MethodName::KdeKnn,
            per_class0: 540,
            per_class1: 540,
            knn_k: 5,
            smote_k: 5,
            bandwidth: BandwidthName::Scott,
            regularization: 1e-6,
            max_attempts: 0,
            normalized_output: false,
        }
    }
}

impl GenerateSection {
    pub fn gen_config(&self, seed: u64) -> GenConfig {
        let total = self.per_class0 + self.per_class1;
        GenConfig {
            per_class_counts: [self.per_class0, self.per_class1],
            knn_k: self.knn_k,
            bandwidth_rule: self.bandwidth.into(),
            regularization: self.regularization,
            smote_k: self.smote_k,
            max_attempts: if self.max_attempts == 0 {
                1000 * total
            } else {
                self.max_attempts
            },
            seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSection {
    pub train_fraction: f64,
    pub seeds: Vec<u64>,
    pub models: Vec<ModelName>,
    pub methods: Vec<MethodName>,
    /// Real-data percentages for experiment 3.
    pub fractions: Vec<u32>,
    /// The single classifier experiment 3 sweeps.
    pub exp3_model: ModelName,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            train_fraction: 0.85,
            seeds: vec![42, 43, 44],
            models: vec![
                ModelName::RandomForest,
                ModelName::SvmLinear,
                ModelName::SvmRbf,
            ],
            methods: vec![MethodName::Smote, MethodName::Kde, MethodName::KdeKnn],
            fractions: vec![100, 80, 60, 40, 20, 0],
            exp3_model: ModelName::SvmRbf,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PrivacySection {
    pub bins: usize,
    pub direction: DirectionName,
}

impl Default for PrivacySection {
    fn default() -> Self {
        PrivacySection {
            bins: 20,
            direction: DirectionName::SyntheticToReal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Smote,
    Kde,
    KdeKnn,
}

impl From<MethodName> for Method {
    fn from(m: MethodName) -> Method {
        match m {
            MethodName::Smote => Method::Smote,
            MethodName::Kde => Method::Kde,
            MethodName::KdeKnn => Method::KdeKnn,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BandwidthName {
    Scott,
    Silverman,
}

impl From<BandwidthName> for BandwidthRule {
    fn from(b: BandwidthName) -> BandwidthRule {
        match b {
            BandwidthName::Scott => BandwidthRule::Scott,
            BandwidthName::Silverman => BandwidthRule::Silverman,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    RandomForest,
    SvmLinear,
    SvmRbf,
}

impl From<ModelName> for ClassifierSpec {
    fn from(m: ModelName) -> ClassifierSpec {
        match m {
            ModelName::RandomForest => ClassifierSpec::random_forest(),
            ModelName::SvmLinear => ClassifierSpec::svm_linear(),
            ModelName::SvmRbf => ClassifierSpec::svm_rbf(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionName {
    SyntheticToReal,
    RealToSynthetic,
}

impl From<DirectionName> for DcrDirection {
    fn from(d: DirectionName) -> DcrDirection {
        match d {
            DirectionName::SyntheticToReal => DcrDirection::SyntheticToReal,
            DirectionName::RealToSynthetic => DcrDirection::RealToSynthetic,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Resolved output directory.
    pub fn out_dir(&self) -> PathBuf {
        if let Some(dir) = &self.out_dir {
            return dir.clone();
        }
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                return PathBuf::from(dir);
            }
        }
        PathBuf::from("privsynth-out")
    }

    pub fn validate(&self) -> Result<()> {
        if self.threads == 0 {
            return Err(CliError::Config("threads must be >= 1".into()));
        }
        if self.experiment.seeds.is_empty() {
            return Err(CliError::Config("experiment.seeds must be non-empty".into()));
        }
        if !(self.experiment.train_fraction > 0.0 && self.experiment.train_fraction < 1.0) {
            return Err(CliError::Config(
                "experiment.train_fraction must lie in (0,1)".into(),
            ));
        }
        if self.privacy.bins == 0 {
            return Err(CliError::Config("privacy.bins must be >= 1".into()));
        }
        self.cohort
            .primary_spec()
            .validate()
            .map_err(CliError::from)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn toml_round_trip_preserves_sections() {
        let cfg = RunConfig::default();
        let text = toml::to_string_pretty(&cfg).unwrap();
        let back: RunConfig = toml::from_str(&text).unwrap();
        assert_eq!(back.seed, cfg.seed);
        assert_eq!(back.generate.per_class0, 540);
        assert_eq!(back.experiment.fractions, vec![100, 80, 60, 40, 20, 0]);
    }

    #[test]
    fn partial_toml_fills_defaults() {
        let cfg: RunConfig = toml::from_str(
            "seed = 7\n[generate]\nmethod = \"smote\"\nper_class0 = 10\nper_class1 = 10\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.generate.per_class0, 10);
        assert_eq!(cfg.generate.knn_k, 5);
        assert_eq!(cfg.cohort.n_class0, 979);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("sede = 7\n").is_err());
    }
}
