//! The four batch commands. Every command writes its data files plus a
//! `manifest.json` carrying a content hash per output; the manifest is the
//! only file with a timestamp, so data outputs are byte-identical across
//! reruns of the same config and seed.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use privsynth::dataset::{feature_medians, impute_with, zscore_apply, zscore_invert, Dataset};
use privsynth::eval::{
    run_experiment1, run_experiment2, run_experiment3, ClassifierSpec, ExperimentReport,
};
use privsynth::generate::{generate, Method, SyntheticBatch};
use privsynth::privacy::{dcr, dcr_baseline, dcr_histogram, DcrReport};

use crate::config::{OutputFormat, RunConfig};
use crate::csvio;
use crate::error::{CliError, Result};
use crate::jsonfmt;
use crate::parallel::ThreadsExec;
use crate::pipeline;

#[derive(Debug, Serialize)]
struct ManifestEntry {
    file: String,
    bytes: u64,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest {
    command: &'static str,
    seed: u64,
    threads: usize,
    created_unix: u64,
    outputs: Vec<ManifestEntry>,
}

/// Collects written files so the manifest can hash them.
struct OutputDir {
    dir: PathBuf,
    entries: Vec<ManifestEntry>,
}

impl OutputDir {
    fn create(dir: &Path) -> Result<OutputDir> {
        std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            entries: Vec::new(),
        })
    }

    fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(CliError::io(&path))?;
        self.entries.push(ManifestEntry {
            file: name.to_string(),
            bytes: bytes.len() as u64,
            sha256: format!("{:x}", Sha256::digest(bytes)),
        });
        Ok(path)
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    fn write_csv_dataset(&mut self, name: &str, ds: &Dataset, label_column: &str) -> Result<PathBuf> {
        // write via csvio into a buffer-backed temp, then register bytes
        let path = self.dir.join(name);
        csvio::write_dataset(&path, ds, label_column)?;
        let bytes = std::fs::read(&path).map_err(CliError::io(&path))?;
        self.entries.push(ManifestEntry {
            file: name.to_string(),
            bytes: bytes.len() as u64,
            sha256: format!("{:x}", Sha256::digest(&bytes)),
        });
        Ok(path)
    }

    fn finish(mut self, command: &'static str, config: &RunConfig) -> Result<()> {
        let manifest = Manifest {
            command,
            seed: config.seed,
            threads: config.threads,
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            outputs: std::mem::take(&mut self.entries),
        };
        let path = self.dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        std::fs::write(&path, text).map_err(CliError::io(&path))?;
        Ok(())
    }
}

/// Simulate the primary and external cohorts and write them as CSV.
pub fn cmd_simulate(config: &RunConfig) -> Result<()> {
    config.validate()?;
    let primary = pipeline::primary_cohort(config, None)?;
    let external = pipeline::external_cohort(config, None)?;
    let mut out = OutputDir::create(&config.out_dir())?;
    out.write_csv_dataset("cohort_primary.csv", &primary, &config.label_column)?;
    out.write_csv_dataset("cohort_external.csv", &external, &config.label_column)?;
    out.finish("simulate", config)?;
    let [p0, p1] = primary.label_counts();
    let [e0, e1] = external.label_counts();
    println!(
        "primary cohort: {} rows ({p0}/{p1}), {} features",
        primary.n(),
        primary.dim()
    );
    println!(
        "external cohort: {} rows ({e0}/{e1}), {} features",
        external.n(),
        external.dim()
    );
    println!("wrote {}", config.out_dir().display());
    Ok(())
}

/// Run one generator end-to-end: load → impute → normalize → generate →
/// de-normalize → write CSV + sidecar.
pub fn cmd_generate(config: &RunConfig, input: Option<&Path>) -> Result<()> {
    config.validate()?;
    let raw = pipeline::primary_cohort(config, input)?;
    let (train_z, stats) = pipeline::normalize_whole(&raw)?;
    let method: Method = config.generate.method.into();
    let gen_config = config.generate.gen_config(config.seed);
    let batch = generate(&train_z, method, &gen_config)?;

    let normalized_units = config.generate.normalized_output;
    let export = if normalized_units {
        batch.data.clone()
    } else {
        zscore_invert(&batch.data, &stats)?
    };
    let mut out = OutputDir::create(&config.out_dir())?;
    let base = format!("synthetic_{}", method.name());
    out.write_csv_dataset(&format!("{base}.csv"), &export, &config.label_column)?;
    out.write_json(
        &format!("{base}.json"),
        &jsonfmt::BatchSidecar::new(&batch, normalized_units),
    )?;
    out.write_json("norm_stats.json", &jsonfmt::NormStatsJson::from(&stats))?;
    out.finish("generate", config)?;
    print_batch_summary(&batch);
    println!("wrote {}", config.out_dir().display());
    Ok(())
}

fn print_batch_summary(batch: &SyntheticBatch) {
    let rates = batch.acceptance_rate_per_class();
    println!(
        "{}: {} rows ({}/{}), acceptance {:.4}/{:.4} ({}/{} and {}/{} draws)",
        batch.method.name(),
        batch.data.n(),
        batch.accepted_per_class[0],
        batch.accepted_per_class[1],
        rates[0],
        rates[1],
        batch.accepted_per_class[0],
        batch.attempted_per_class[0],
        batch.accepted_per_class[1],
        batch.attempted_per_class[1],
    );
}

/// DCR privacy audit: synthetic-vs-real distances, the real-real baseline,
/// and a verdict line.
pub fn cmd_privacy(
    config: &RunConfig,
    real_input: Option<&Path>,
    synthetic_input: Option<&Path>,
) -> Result<()> {
    config.validate()?;
    let real_raw = pipeline::primary_cohort(config, real_input)?;
    let medians = feature_medians(&real_raw)?;
    let real_imp = impute_with(&real_raw, &medians)?;
    let stats = privsynth::dataset::zscore_fit(&real_imp)?;
    let real_z = zscore_apply(&real_imp, &stats)?;

    let (synthetic_z, generated): (Dataset, Option<SyntheticBatch>) = match synthetic_input {
        Some(path) => {
            let ds = csvio::read_dataset(path, &config.label_column)?;
            if ds.dim() != real_z.dim() {
                return Err(CliError::Config(format!(
                    "synthetic data has {} features but the real data has {}",
                    ds.dim(),
                    real_z.dim()
                )));
            }
            let imp = impute_with(&ds, &medians)?;
            (zscore_apply(&imp, &stats)?, None)
        }
        None => {
            let method: Method = config.generate.method.into();
            let batch = generate(&real_z, method, &config.generate.gen_config(config.seed))?;
            (batch.data.clone(), Some(batch))
        }
    };

    let direction = config.privacy.direction.into();
    let synth_report = dcr_histogram(
        dcr(real_z.features(), synthetic_z.features(), direction)?,
        config.privacy.bins,
    )?;
    let base_report = dcr_histogram(dcr_baseline(real_z.features())?, config.privacy.bins)?;

    let mut out = OutputDir::create(&config.out_dir())?;
    out.write_json("dcr_synthetic.json", &jsonfmt::dcr_to_json(&synth_report))?;
    out.write_json("dcr_baseline.json", &jsonfmt::dcr_to_json(&base_report))?;
    out.write_bytes(
        "dcr_synthetic_hist.csv",
        jsonfmt::dcr_histogram_csv(&synth_report).as_bytes(),
    )?;
    out.write_bytes(
        "dcr_baseline_hist.csv",
        jsonfmt::dcr_histogram_csv(&base_report).as_bytes(),
    )?;
    out.finish("privacy", config)?;

    if let Some(batch) = &generated {
        print_batch_summary(batch);
    }
    print_privacy_verdict(config, &synth_report, &base_report)?;
    Ok(())
}

fn print_privacy_verdict(
    config: &RunConfig,
    synth: &DcrReport,
    baseline: &DcrReport,
) -> Result<()> {
    match config.format {
        OutputFormat::Json => {
            let combined = serde_json::json!({
                "synthetic": jsonfmt::dcr_to_json(synth),
                "baseline": jsonfmt::dcr_to_json(baseline),
            });
            println!("{}", serde_json::to_string_pretty(&combined)?);
        }
        _ => {
            println!(
                "mean DCR ({}): {:.4}",
                synth.direction.name(),
                synth.mean_dcr
            );
            println!("mean DCR (real-real baseline): {:.4}", baseline.mean_dcr);
        }
    }
    let verdict = if synth.mean_dcr >= baseline.mean_dcr {
        "above the real-real baseline: synthetic records are farther from real \
         records than real records are from each other"
    } else {
        "below the real-real baseline: synthetic records sit closer to real \
         records than real records do to each other (privacy risk)"
    };
    println!("verdict: {verdict}");
    Ok(())
}

/// Run one of the three experiment protocols and write its report.
pub fn cmd_experiment(
    config: &RunConfig,
    which: u8,
    input: Option<&Path>,
    external_input: Option<&Path>,
) -> Result<()> {
    config.validate()?;
    let primary = pipeline::primary_cohort(config, input)?;
    let external = pipeline::external_cohort(config, external_input)?;
    let prepared = pipeline::prepare(
        &primary,
        &external,
        config.experiment.train_fraction,
        config.seed,
    )?;
    let exec = ThreadsExec::new(config.threads)?;
    let seeds = &config.experiment.seeds;
    let specs: Vec<ClassifierSpec> = config
        .experiment
        .models
        .iter()
        .map(|&m| m.into())
        .collect();
    let gen_config = config.generate.gen_config(config.seed);

    let report: ExperimentReport = match which {
        1 => run_experiment1(
            &prepared.train,
            &prepared.test,
            &prepared.external,
            &specs,
            seeds,
            &exec,
        )?,
        2 => {
            let methods: Vec<Method> = config
                .experiment
                .methods
                .iter()
                .map(|&m| m.into())
                .collect();
            run_experiment2(
                &prepared.train,
                &prepared.test,
                &prepared.external,
                &methods,
                &specs,
                &gen_config,
                seeds,
                &exec,
            )?
        }
        3 => run_experiment3(
            &prepared.train,
            &prepared.test,
            &prepared.external,
            &config.experiment.fractions,
            &config.experiment.exp3_model.into(),
            &gen_config,
            seeds,
            &exec,
        )?,
        other => {
            return Err(CliError::Config(format!(
                "experiment must be 1, 2, or 3, got {other}"
            )))
        }
    };

    let mut out = OutputDir::create(&config.out_dir())?;
    out.write_json(
        &format!("experiment{which}.json"),
        &jsonfmt::experiment_to_json(&report),
    )?;
    let table = jsonfmt::experiment_table(&report);
    out.write_bytes(&format!("experiment{which}.txt"), table.as_bytes())?;
    out.finish("experiment", config)?;

    match config.format {
        OutputFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&jsonfmt::experiment_to_json(&report))?
        ),
        OutputFormat::Csv => print!("{}", jsonfmt::experiment_csv(&report)),
        OutputFormat::Table => print!("{table}"),
    }
    Ok(())
}
