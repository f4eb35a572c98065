//! Distance-to-closest-record (DCR) privacy analysis.
//!
//! For each probe row the report records the Euclidean distance to its
//! nearest record in a reference set; the mean summarizes how close the
//! synthetic data sits to the real data (low = near-copies, privacy risk).
//! The real-real baseline measures the same quantity inside the real set
//! with the probe row excluded, giving the natural comparison point. All
//! searches run on the exact KD-tree, so results equal a brute-force scan.

use alloc::vec::Vec;

use crate::error::Error;
use crate::knn::KdTree;
use crate::matrix::Matrix;
use crate::Result;

/// Which way the nearest-record search runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcrDirection {
    /// Each synthetic row → nearest real row (the reporting default).
    SyntheticToReal,
    /// Each real row → nearest synthetic row.
    RealToSynthetic,
    /// Each real row → nearest *other* real row.
    RealToRealBaseline,
}

impl DcrDirection {
    pub fn name(self) -> &'static str {
        match self {
            DcrDirection::SyntheticToReal => "synthetic-to-real",
            DcrDirection::RealToSynthetic => "real-to-synthetic",
            DcrDirection::RealToRealBaseline => "real-to-real-baseline",
        }
    }
}

/// One histogram bin: `[lower, upper)` except the last bin, which includes
/// its upper edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

/// Nearest-record distances for a set of probes.
#[derive(Debug, Clone, PartialEq)]
pub struct DcrReport {
    pub distances: Vec<f64>,
    pub mean_dcr: f64,
    pub direction: DcrDirection,
    pub histogram: Vec<HistBin>,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// DCR between a real and a synthetic set. `SyntheticToReal` probes every
/// synthetic row against the real set; `RealToSynthetic` is the transpose.
/// Both matrices must be in the same (z-scored) feature space.
pub fn dcr(real: &Matrix, synthetic: &Matrix, direction: DcrDirection) -> Result<DcrReport> {
    if real.rows() == 0 || synthetic.rows() == 0 {
        return Err(Error::InsufficientData(
            "DCR needs non-empty real and synthetic sets".into(),
        ));
    }
    if real.cols() != synthetic.cols() {
        return Err(Error::DimMismatch {
            expected: real.cols(),
            got: synthetic.cols(),
        });
    }
    let (probes, reference) = match direction {
        DcrDirection::SyntheticToReal => (synthetic, real),
        DcrDirection::RealToSynthetic => (real, synthetic),
        DcrDirection::RealToRealBaseline => {
            return Err(Error::InvalidParam(
                "use dcr_baseline for the real-real direction".into(),
            ))
        }
    };
    let tree = KdTree::build(reference);
    let mut distances = Vec::with_capacity(probes.rows());
    for probe in probes.iter_rows() {
        let found = tree.kneighbors(reference, probe, 1)?;
        distances.push(found[0].1);
    }
    Ok(DcrReport {
        mean_dcr: mean(&distances),
        distances,
        direction,
        histogram: Vec::new(),
    })
}

/// Leave-one-out baseline: each real row's distance to its nearest other
/// real row.
pub fn dcr_baseline(real: &Matrix) -> Result<DcrReport> {
    if real.rows() < 2 {
        return Err(Error::InsufficientData(
            "real-real baseline needs at least 2 rows".into(),
        ));
    }
    let tree = KdTree::build(real);
    let mut distances = Vec::with_capacity(real.rows());
    for (i, probe) in real.iter_rows().enumerate() {
        let found = tree.kneighbors(real, probe, 2)?;
        let (_, d) = found
            .into_iter()
            .find(|(j, _)| *j != i)
            .expect("k=2 over n>=2 rows contains a non-self neighbor");
        distances.push(d);
    }
    Ok(DcrReport {
        mean_dcr: mean(&distances),
        distances,
        direction: DcrDirection::RealToRealBaseline,
        histogram: Vec::new(),
    })
}

/// Populate the report's histogram with `bins` equal-width bins spanning
/// `[0, max distance]`; the last bin is right-inclusive.
pub fn dcr_histogram(mut report: DcrReport, bins: usize) -> Result<DcrReport> {
    if bins == 0 {
        return Err(Error::InvalidParam("histogram needs at least 1 bin".into()));
    }
    let max = report
        .distances
        .iter()
        .copied()
        .fold(0.0f64, f64::max);
    let width = max / bins as f64;
    let mut counts = alloc::vec![0usize; bins];
    for &d in &report.distances {
        let at = if width > 0.0 {
            ((d / width) as usize).min(bins - 1)
        } else {
            0
        };
        counts[at] += 1;
    }
    report.histogram = counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistBin {
            lower: i as f64 * width,
            upper: (i + 1) as f64 * width,
            count,
        })
        .collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::sq_dist;
    use crate::rng::{normal_vec, RngKey};
    use alloc::vec;

    fn col(values: &[f64]) -> Matrix {
        Matrix::from_vec(values.len(), 1, values.to_vec()).unwrap()
    }

    #[test]
    fn exact_copies_have_zero_dcr() {
        let real = col(&[0.0, 1.0, 5.0]);
        let report = dcr(&real, &real, DcrDirection::SyntheticToReal).unwrap();
        assert_eq!(report.distances, vec![0.0, 0.0, 0.0]);
        assert_eq!(report.mean_dcr, 0.0);
    }

    #[test]
    fn single_pair_distance() {
        let real = col(&[0.0]);
        let synthetic = col(&[3.0]);
        let report = dcr(&real, &synthetic, DcrDirection::SyntheticToReal).unwrap();
        assert_eq!(report.mean_dcr, 3.0);
    }

    #[test]
    fn directions_transpose_probe_sets() {
        let real = col(&[0.0, 10.0]);
        let synthetic = col(&[1.0]);
        let s2r = dcr(&real, &synthetic, DcrDirection::SyntheticToReal).unwrap();
        let r2s = dcr(&real, &synthetic, DcrDirection::RealToSynthetic).unwrap();
        assert_eq!(s2r.distances.len(), 1);
        assert_eq!(r2s.distances.len(), 2);
        assert_eq!(r2s.distances, vec![1.0, 9.0]);
    }

    #[test]
    fn baseline_hand_example() {
        let real = col(&[0.0, 1.0, 5.0]);
        let report = dcr_baseline(&real).unwrap();
        assert_eq!(report.distances, vec![1.0, 1.0, 4.0]);
        assert_eq!(report.mean_dcr, 2.0);
        assert_eq!(report.direction, DcrDirection::RealToRealBaseline);
    }

    #[test]
    fn duplicated_row_gets_zero_baseline() {
        let real = col(&[2.0, 7.0, 2.0]);
        let report = dcr_baseline(&real).unwrap();
        assert_eq!(report.distances[0], 0.0);
        assert_eq!(report.distances[2], 0.0);
    }

    #[test]
    fn matches_double_loop_oracle() {
        let mut r = RngKey::new(6).rng();
        let real = Matrix::from_vec(40, 4, normal_vec(&mut r, 160)).unwrap();
        let synthetic = Matrix::from_vec(25, 4, normal_vec(&mut r, 100)).unwrap();
        let report = dcr(&real, &synthetic, DcrDirection::SyntheticToReal).unwrap();
        for (probe, got) in synthetic.iter_rows().zip(&report.distances) {
            let want = real
                .iter_rows()
                .map(|row| sq_dist(probe, row))
                .fold(f64::INFINITY, f64::min)
                .sqrt();
            assert_eq!(*got, want);
        }
        let want_mean: f64 =
            report.distances.iter().sum::<f64>() / report.distances.len() as f64;
        assert!((report.mean_dcr - want_mean).abs() <= 1e-12 * want_mean.abs());
    }

    #[test]
    fn baseline_matches_leave_one_out_oracle() {
        let mut r = RngKey::new(61).rng();
        let real = Matrix::from_vec(60, 5, normal_vec(&mut r, 300)).unwrap();
        let report = dcr_baseline(&real).unwrap();
        for (i, got) in report.distances.iter().enumerate() {
            let want = real
                .iter_rows()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, row)| sq_dist(real.row(i), row))
                .fold(f64::INFINITY, f64::min)
                .sqrt();
            assert_eq!(*got, want);
        }
    }

    #[test]
    fn histogram_two_bins() {
        let report = DcrReport {
            distances: vec![1.0, 1.0, 4.0],
            mean_dcr: 2.0,
            direction: DcrDirection::SyntheticToReal,
            histogram: Vec::new(),
        };
        let report = dcr_histogram(report, 2).unwrap();
        assert_eq!(report.histogram[0].count, 2);
        assert_eq!(report.histogram[1].count, 1);
        assert_eq!(report.histogram[0].lower, 0.0);
        assert_eq!(report.histogram[1].upper, 4.0);
    }

    #[test]
    fn histogram_single_distance() {
        let report = DcrReport {
            distances: vec![2.5],
            mean_dcr: 2.5,
            direction: DcrDirection::SyntheticToReal,
            histogram: Vec::new(),
        };
        let report = dcr_histogram(report, 1).unwrap();
        assert_eq!(report.histogram.len(), 1);
        assert_eq!(report.histogram[0].count, 1);
    }

    #[test]
    fn histogram_conserves_count() {
        let mut r = RngKey::new(77).rng();
        let distances: Vec<f64> = normal_vec(&mut r, 1000).iter().map(|v| v.abs()).collect();
        let report = DcrReport {
            mean_dcr: 0.0,
            distances,
            direction: DcrDirection::RealToSynthetic,
            histogram: Vec::new(),
        };
        let report = dcr_histogram(report, 20).unwrap();
        let total: usize = report.histogram.iter().map(|b| b.count).sum();
        assert_eq!(total, 1000);
        assert_eq!(report.histogram.len(), 20);
    }

    #[test]
    fn mean_is_permutation_invariant() {
        let real = col(&[0.0, 2.0, 9.0, -3.0]);
        let synthetic_a = col(&[1.0, 8.0]);
        let synthetic_b = col(&[8.0, 1.0]);
        let a = dcr(&real, &synthetic_a, DcrDirection::SyntheticToReal).unwrap();
        let b = dcr(&real, &synthetic_b, DcrDirection::SyntheticToReal).unwrap();
        assert_eq!(a.mean_dcr, b.mean_dcr);
    }
}
