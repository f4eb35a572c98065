//! JSON schemas for the library's reportable values, plus the aligned text
//! tables the experiment commands print.

use serde::{Deserialize, Serialize};

use privsynth::dataset::NormStats;
use privsynth::eval::ExperimentReport;
use privsynth::generate::SyntheticBatch;
use privsynth::kde::{BandwidthRule, KdeModel};
use privsynth::matrix::Matrix;
use privsynth::privacy::DcrReport;

use crate::error::Result;

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct NormStatsJson {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub degenerate: Vec<bool>,
}

impl From<&NormStats> for NormStatsJson {
    fn from(s: &NormStats) -> Self {
        NormStatsJson {
            means: s.means.clone(),
            stds: s.stds.clone(),
            degenerate: s.degenerate.clone(),
        }
    }
}

impl From<NormStatsJson> for NormStats {
    fn from(j: NormStatsJson) -> Self {
        NormStats {
            means: j.means,
            stds: j.stds,
            degenerate: j.degenerate,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct KdeModelJson {
    pub support: Vec<Vec<f64>>,
    /// Lower-triangular bandwidth factor, row by row.
    pub bandwidth_chol: Vec<Vec<f64>>,
    pub rule: String,
    pub regularization: f64,
}

pub fn kde_to_json(model: &KdeModel) -> KdeModelJson {
    KdeModelJson {
        support: model.support().iter_rows().map(<[f64]>::to_vec).collect(),
        bandwidth_chol: model
            .bandwidth_chol()
            .iter_rows()
            .map(<[f64]>::to_vec)
            .collect(),
        rule: model.rule().name().to_string(),
        regularization: model.regularization(),
    }
}

pub fn kde_from_json(j: &KdeModelJson) -> Result<KdeModel> {
    let rule = match j.rule.as_str() {
        "silverman" => BandwidthRule::Silverman,
        _ => BandwidthRule::Scott,
    };
    let support = Matrix::from_rows(&j.support)?;
    let chol = Matrix::from_rows(&j.bandwidth_chol)?;
    Ok(KdeModel::from_parts(support, chol, rule, j.regularization)?)
}

/// Sidecar describing a generated batch.
#[derive(Debug, Serialize, Deserialize)]
pub struct BatchSidecar {
    pub method: String,
    pub seed: u64,
    pub per_class_counts: [usize; 2],
    pub accepted: [usize; 2],
    pub attempted: [usize; 2],
    pub acceptance_rates: [f64; 2],
    /// Whether the CSV rows are z-scored or raw units.
    pub normalized_units: bool,
}

impl BatchSidecar {
    pub fn new(batch: &SyntheticBatch, normalized_units: bool) -> Self {
        BatchSidecar {
            method: batch.method.name().to_string(),
            seed: batch.seed,
            per_class_counts: batch.accepted_per_class,
            accepted: batch.accepted_per_class,
            attempted: batch.attempted_per_class,
            acceptance_rates: batch.acceptance_rate_per_class(),
            normalized_units,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DcrJson {
    pub direction: String,
    pub mean_dcr: f64,
    pub n_probes: usize,
    pub histogram: Vec<DcrBinJson>,
    pub distances: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DcrBinJson {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

pub fn dcr_to_json(report: &DcrReport) -> DcrJson {
    DcrJson {
        direction: report.direction.name().to_string(),
        mean_dcr: report.mean_dcr,
        n_probes: report.distances.len(),
        histogram: report
            .histogram
            .iter()
            .map(|b| DcrBinJson {
                lower: b.lower,
                upper: b.upper,
                count: b.count,
            })
            .collect(),
        distances: report.distances.clone(),
    }
}

/// Two-column histogram CSV (bin_center, count) for external plotting.
pub fn dcr_histogram_csv(report: &DcrReport) -> String {
    let mut out = String::from("bin_center,count\n");
    for b in &report.histogram {
        out.push_str(&format!("{},{}\n", 0.5 * (b.lower + b.upper), b.count));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExperimentJson {
    pub experiment: u8,
    pub seeds: Vec<u64>,
    pub rows: Vec<ExperimentRowJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExperimentRowJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub real_pct: Option<u32>,
    pub test_auc_mean: f64,
    pub test_auc_var: f64,
    pub external_auc_mean: f64,
    pub external_auc_var: f64,
    pub test_aucs: Vec<f64>,
    pub external_aucs: Vec<f64>,
}

pub fn experiment_to_json(report: &ExperimentReport) -> ExperimentJson {
    ExperimentJson {
        experiment: report.experiment,
        seeds: report.seeds.clone(),
        rows: report
            .rows
            .iter()
            .map(|r| ExperimentRowJson {
                method: r.method.map(|m| m.name().to_string()),
                model: r.model.to_string(),
                real_pct: r.real_pct,
                test_auc_mean: r.test_mean,
                test_auc_var: r.test_var,
                external_auc_mean: r.external_mean,
                external_auc_var: r.external_var,
                test_aucs: r.test_aucs.clone(),
                external_aucs: r.external_aucs.clone(),
            })
            .collect(),
    }
}

fn fmt_cell(mean: f64, var: f64) -> String {
    format!("{mean:.4} ± {var:.4}")
}

/// Aligned text table for an experiment report (the Tables 3–5 layout).
pub fn experiment_table(report: &ExperimentReport) -> String {
    let mut rows: Vec<[String; 4]> = Vec::new();
    let header: [String; 4] = match report.experiment {
        3 => [
            "% Real".into(),
            "% Synthetic".into(),
            "Test AUC".into(),
            "External AUC".into(),
        ],
        2 => [
            "Method".into(),
            "Model".into(),
            "Test AUC".into(),
            "External AUC".into(),
        ],
        _ => [
            "Model".into(),
            "".into(),
            "Test AUC".into(),
            "External AUC".into(),
        ],
    };
    for r in &report.rows {
        let (a, b) = match report.experiment {
            3 => {
                let pct = r.real_pct.unwrap_or(0);
                (format!("{pct}"), format!("{}", 100 - pct))
            }
            2 => (
                r.method.map(|m| m.name().to_string()).unwrap_or_default(),
                r.model.to_string(),
            ),
            _ => (r.model.to_string(), String::new()),
        };
        rows.push([
            a,
            b,
            fmt_cell(r.test_mean, r.test_var),
            fmt_cell(r.external_mean, r.external_var),
        ]);
    }

    let mut widths = [0usize; 4];
    for row in std::iter::once(&header).chain(&rows) {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let render = |row: &[String; 4]| {
        let mut line = String::new();
        for (i, (cell, w)) in row.iter().zip(widths).enumerate() {
            if w == 0 {
                continue;
            }
            if i > 0 && !line.is_empty() {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:<w$}"));
        }
        line.trim_end().to_string()
    };
    let mut out = format!("Experiment {}\n", report.experiment);
    out.push_str(&render(&header));
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().filter(|&&w| w > 0).sum::<usize>() + 6));
    out.push('\n');
    for row in &rows {
        out.push_str(&render(row));
        out.push('\n');
    }
    out
}

/// CSV rendering of an experiment report.
pub fn experiment_csv(report: &ExperimentReport) -> String {
    let mut out =
        String::from("experiment,method,model,real_pct,test_auc_mean,test_auc_var,external_auc_mean,external_auc_var\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            report.experiment,
            r.method.map(|m| m.name()).unwrap_or(""),
            r.model,
            r.real_pct.map(|p| p.to_string()).unwrap_or_default(),
            r.test_mean,
            r.test_var,
            r.external_mean,
            r.external_var,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use privsynth::rng::{normal_vec, RngKey};

    #[test]
    fn kde_json_round_trip_preserves_density() {
        let mut r = RngKey::new(3).rng();
        let pts = Matrix::from_vec(12, 2, normal_vec(&mut r, 24)).unwrap();
        let model = KdeModel::fit(&pts, BandwidthRule::Scott, 1e-6).unwrap();
        let json = serde_json::to_string(&kde_to_json(&model)).unwrap();
        let parsed: KdeModelJson = serde_json::from_str(&json).unwrap();
        let back = kde_from_json(&parsed).unwrap();
        let x = [0.3, -0.7];
        assert_eq!(model.density(&x).unwrap(), back.density(&x).unwrap());
    }

    #[test]
    fn norm_stats_json_shape() {
        let stats = NormStats {
            means: vec![1.0, 2.0],
            stds: vec![0.5, 1.0],
            degenerate: vec![false, true],
        };
        let json = serde_json::to_string(&NormStatsJson::from(&stats)).unwrap();
        assert_eq!(
            json,
            r#"{"means":[1.0,2.0],"stds":[0.5,1.0],"degenerate":[false,true]}"#
        );
    }
}
