//! Dataset CSV format: UTF-8, comma-separated, header row, '.' decimal
//! point, missing cells empty or "NA", binary label column named by flag.
//! Values are written with Rust's shortest round-trip float formatting, so
//! a write/read cycle reproduces them bit-exactly.

use std::path::Path;

use privsynth::dataset::Dataset;
use privsynth::matrix::Matrix;

use crate::error::{CliError, Result};

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "NA"
}

/// Read a labeled dataset. The label column must hold {0,1} (numeric) or
/// exactly two distinct strings, mapped to 0/1 by sorted order.
pub fn read_dataset(path: &Path, label_column: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| csv_error(path, &e))?;

    let headers = reader.headers().map_err(|e| csv_error(path, &e))?.clone();
    let label_at = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| CliError::Csv {
            path: path.into(),
            line: Some(1),
            message: format!("label column '{label_column}' not found in header"),
        })?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_at)
        .map(|(_, h)| h.to_string())
        .collect();

    let mut raw_labels: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, &e))?;
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or(rows.len() as u64 + 2);
        let mut row = Vec::with_capacity(feature_names.len());
        for (i, cell) in record.iter().enumerate() {
            if i == label_at {
                raw_labels.push(cell.trim().to_string());
                continue;
            }
            let cell = cell.trim();
            if is_missing(cell) {
                row.push(f64::NAN);
            } else {
                row.push(cell.parse::<f64>().map_err(|_| CliError::Csv {
                    path: path.into(),
                    line: Some(line),
                    message: format!(
                        "column '{}': '{cell}' is not a number or missing marker",
                        headers.get(i).unwrap_or("?")
                    ),
                })?);
            }
        }
        rows.push(row);
    }
    if rows.len() < 2 {
        return Err(CliError::Csv {
            path: path.into(),
            line: None,
            message: format!("need at least 2 data rows, found {}", rows.len()),
        });
    }

    let labels = parse_labels(path, &raw_labels)?;
    let features = Matrix::from_rows(&rows)?;
    Dataset::new(features, labels, feature_names, false).map_err(CliError::from)
}

fn parse_labels(path: &Path, raw: &[String]) -> Result<Vec<u8>> {
    let numeric: Option<Vec<u8>> = raw
        .iter()
        .map(|s| match s.parse::<f64>() {
            Ok(v) if v == 0.0 => Some(0),
            Ok(v) if v == 1.0 => Some(1),
            _ => None,
        })
        .collect();
    if let Some(labels) = numeric {
        return Ok(labels);
    }
    let mut distinct: Vec<&String> = Vec::new();
    for s in raw {
        if !distinct.contains(&s) {
            distinct.push(s);
        }
    }
    if distinct.len() != 2 {
        return Err(CliError::Csv {
            path: path.into(),
            line: None,
            message: format!(
                "label column must hold 0/1 or exactly two distinct values, found {}",
                distinct.len()
            ),
        });
    }
    distinct.sort();
    Ok(raw.iter().map(|s| u8::from(s == distinct[1])).collect())
}

/// Write a dataset; missing values (NaN) become empty cells.
pub fn write_dataset(path: &Path, ds: &Dataset, label_column: &str) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, &e))?;
    let mut header: Vec<&str> = ds.feature_names().iter().map(String::as_str).collect();
    header.push(label_column);
    writer.write_record(&header).map_err(|e| csv_error(path, &e))?;
    let mut record: Vec<String> = Vec::with_capacity(header.len());
    for (row, label) in ds.features().iter_rows().zip(ds.labels()) {
        record.clear();
        for v in row {
            record.push(if v.is_nan() {
                String::new()
            } else {
                format!("{v}")
            });
        }
        record.push(format!("{label}"));
        writer.write_record(&record).map_err(|e| csv_error(path, &e))?;
    }
    writer.flush().map_err(CliError::io(path))?;
    Ok(())
}

fn csv_error(path: &Path, e: &csv::Error) -> CliError {
    let line = match e.kind() {
        csv::ErrorKind::Utf8 { pos, .. } => pos.as_ref().map(|p| p.line()),
        csv::ErrorKind::UnequalLengths { pos, .. } => pos.as_ref().map(|p| p.line()),
        csv::ErrorKind::Deserialize { pos, .. } => pos.as_ref().map(|p| p.line()),
        _ => None,
    };
    CliError::Csv {
        path: path.into(),
        line,
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn parses_a_small_file() {
        let f = write_tmp("a,b,label\n1.5,2,0\n3,4,1\n5,6,0\n");
        let ds = read_dataset(f.path(), "label").unwrap();
        assert_eq!(ds.n(), 3);
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.labels(), &[0, 1, 0]);
        assert_eq!(ds.features().get(0, 0), 1.5);
    }

    #[test]
    fn missing_markers_become_nan() {
        let f = write_tmp("a,b,label\n1,,0\nNA,4,1\n");
        let ds = read_dataset(f.path(), "label").unwrap();
        assert!(ds.features().get(0, 1).is_nan());
        assert!(ds.features().get(1, 0).is_nan());
        assert!(ds.has_missing());
    }

    #[test]
    fn string_labels_map_by_sorted_order() {
        let f = write_tmp("a,label\n1,sepsis\n2,control\n3,control\n");
        let ds = read_dataset(f.path(), "label").unwrap();
        // sorted: control < sepsis, so control = 0
        assert_eq!(ds.labels(), &[1, 0, 0]);
    }

    #[test]
    fn non_numeric_cell_reports_line() {
        let f = write_tmp("a,label\n1,0\nx,1\n");
        match read_dataset(f.path(), "label") {
            Err(CliError::Csv { line, message, .. }) => {
                assert_eq!(line, Some(3));
                assert!(message.contains("'x'"), "{message}");
            }
            other => panic!("expected CSV error, got {other:?}"),
        }
    }

    #[test]
    fn ragged_rows_report_line() {
        let f = write_tmp("a,b,label\n1,2,0\n3,1\n");
        match read_dataset(f.path(), "label") {
            Err(CliError::Csv { line, .. }) => assert_eq!(line, Some(3)),
            other => panic!("expected CSV error, got {other:?}"),
        }
    }

    #[test]
    fn single_row_is_insufficient() {
        let f = write_tmp("a,label\n1,0\n");
        match read_dataset(f.path(), "label") {
            Err(CliError::Csv { message, .. }) => assert!(message.contains("at least 2")),
            other => panic!("expected CSV error, got {other:?}"),
        }
    }

    #[test]
    fn missing_label_column_is_an_error() {
        let f = write_tmp("a,b\n1,2\n3,4\n");
        assert!(matches!(
            read_dataset(f.path(), "label"),
            Err(CliError::Csv { .. })
        ));
    }

    #[test]
    fn roundtrip_is_bit_exact() {
        let f = write_tmp("a,b,label\n0.1,-2.25e-3,0\n1e30,0.30000000000000004,1\n");
        let ds = read_dataset(f.path(), "label").unwrap();
        let out = tempfile::NamedTempFile::new().unwrap();
        write_dataset(out.path(), &ds, "label").unwrap();
        let back = read_dataset(out.path(), "label").unwrap();
        assert_eq!(back.features().as_slice(), ds.features().as_slice());
        assert_eq!(back.labels(), ds.labels());
    }
}
