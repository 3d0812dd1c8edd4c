//! CSV ingestion and emission.
//!
//! Input format: UTF-8, comma separated, first row is the header. A cell
//! that is empty (after trimming) or equal to `?` is missing. Attribute
//! kinds are inferred per column unless overridden by a schema file of
//! flat `attribute_name=kind` lines.

use std::collections::HashMap;
use std::path::Path;

use crate::data::{AttributeKind, Dataset, LabeledDataset};
use crate::error::{Error, Result};

fn is_missing(cell: &str) -> bool {
    let t = cell.trim();
    t.is_empty() || t == "?"
}

/// Read a CSV file into a [`Dataset`].
///
/// Kind inference: a column whose unmasked cells are all `0`/`1` is
/// binary; otherwise, if every unmasked cell parses as a number, it is
/// continuous; otherwise it is categorical and distinct strings are coded
/// 0, 1, 2... in first-appearance order. `schema` overrides win; forcing
/// continuous or binary onto a column that does not parse is an error
/// naming the offending cell.
pub fn load_csv(path: &Path, schema: &HashMap<String, AttributeKind>) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::io(path.display().to_string(), into_io(e)))?;

    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::io(path.display().to_string(), into_io(e)))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    let n_cols = header.len();

    for name in schema.keys() {
        if !header.iter().any(|h| h == name) {
            return Err(Error::UnknownAttribute(name.clone()));
        }
    }

    let mut cells: Vec<Vec<Option<String>>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::io(path.display().to_string(), into_io(e)))?;
        // Data rows are 1-based in messages; the header is row 0.
        if record.len() != n_cols {
            return Err(Error::RaggedRow {
                row: i + 1,
                expected: n_cols,
                found: record.len(),
            });
        }
        cells.push(
            record
                .iter()
                .map(|c| {
                    if is_missing(c) {
                        None
                    } else {
                        Some(c.to_string())
                    }
                })
                .collect(),
        );
    }

    let n_rows = cells.len();
    let mut kinds = Vec::with_capacity(n_cols);
    for c in 0..n_cols {
        let kind = match schema.get(&header[c]) {
            Some(&k) => k,
            None => infer_kind(cells.iter().filter_map(|row| row[c].as_deref())),
        };
        kinds.push(kind);
    }

    let mut values = vec![0.0_f64; n_rows * n_cols];
    let mut mask = vec![false; n_rows * n_cols];
    for c in 0..n_cols {
        let mut codes: Vec<String> = Vec::new();
        for r in 0..n_rows {
            let idx = r * n_cols + c;
            match &cells[r][c] {
                None => mask[idx] = true,
                Some(text) => {
                    values[idx] = match kinds[c] {
                        AttributeKind::Continuous => {
                            text.parse::<f64>().map_err(|_| Error::BadNumericCell {
                                row: r + 1,
                                column: header[c].clone(),
                                value: text.clone(),
                            })?
                        }
                        AttributeKind::Binary => match text.parse::<f64>() {
                            Ok(v) if v == 0.0 || v == 1.0 => v,
                            _ => {
                                return Err(Error::BadBinaryCell {
                                    row: r + 1,
                                    column: header[c].clone(),
                                    value: text.clone(),
                                })
                            }
                        },
                        AttributeKind::Categorical => {
                            let code = match codes.iter().position(|k| k == text) {
                                Some(p) => p,
                                None => {
                                    codes.push(text.clone());
                                    codes.len() - 1
                                }
                            };
                            code as f64
                        }
                    };
                }
            }
        }
    }

    Dataset::new(
        header,
        kinds,
        (0..n_rows).map(|r| r.to_string()).collect(),
        values,
        mask,
    )
}

fn infer_kind<'a>(observed: impl Iterator<Item = &'a str>) -> AttributeKind {
    let mut any = false;
    let mut all_binary = true;
    let mut all_numeric = true;
    for cell in observed {
        any = true;
        match cell.parse::<f64>() {
            Ok(v) => {
                if v != 0.0 && v != 1.0 {
                    all_binary = false;
                }
            }
            Err(_) => {
                all_binary = false;
                all_numeric = false;
            }
        }
    }
    // A column with no observed values defaults to continuous; imputation
    // rejects it anyway.
    if !any || (all_numeric && !all_binary) {
        AttributeKind::Continuous
    } else if all_binary {
        AttributeKind::Binary
    } else {
        AttributeKind::Categorical
    }
}

/// Parse a schema override file of `attribute_name=kind` lines.
/// Blank lines and `#` comments are ignored.
pub fn load_schema_overrides(path: &Path) -> Result<HashMap<String, AttributeKind>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, kind) = line.split_once('=').ok_or_else(|| Error::BadSchemaLine {
            line: i + 1,
            text: line.to_string(),
        })?;
        out.insert(name.trim().to_string(), kind.trim().parse()?);
    }
    Ok(out)
}

/// Format a value the way dataset CSV files store it: integers without a
/// decimal point, everything else via shortest round-trip formatting.
pub(crate) fn format_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Write a labeled dataset as CSV with the label as a final column named
/// `label` holding class indices.
pub fn write_labeled_csv(ld: &LabeledDataset, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Error::io(path.display().to_string(), into_io(e)))?;
    let mut header: Vec<String> = ld.dataset.attribute_names.clone();
    header.push("label".to_string());
    writer
        .write_record(&header)
        .map_err(|e| Error::io(path.display().to_string(), into_io(e)))?;
    for r in 0..ld.n_samples() {
        let mut record: Vec<String> = (0..ld.dataset.n_attributes())
            .map(|c| match ld.dataset.get(r, c) {
                Some(v) => format_value(v),
                None => "?".to_string(),
            })
            .collect();
        record.push(ld.labels[r].to_string());
        writer
            .write_record(&record)
            .map_err(|e| Error::io(path.display().to_string(), into_io(e)))?;
    }
    writer
        .flush()
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

fn into_io(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    }
}
