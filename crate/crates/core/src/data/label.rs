//! Classification target derivation.

use crate::data::{Dataset, LabeledDataset};
use crate::error::{Error, Result};

/// Numeric codes of the survival status column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatusCodes {
    pub alive: f64,
    pub dead_disease: f64,
    pub dead_other: f64,
}

impl Default for StatusCodes {
    fn default() -> Self {
        StatusCodes {
            alive: 0.0,
            dead_disease: 1.0,
            dead_other: 2.0,
        }
    }
}

/// How to turn a raw table into a labeled classification task.
#[derive(Debug, Clone, PartialEq)]
pub enum LabelSpec {
    /// Classify by a stage column, keeping only the listed stage values.
    ///
    /// Samples whose stage is outside `keep_stages` (or masked) are
    /// removed; kept stages are relabeled 0..C-1 in ascending stage
    /// order. The stage column and every `drop_columns` entry (columns
    /// known to leak the answer) are removed from the features.
    Stage {
        column: String,
        keep_stages: Vec<i64>,
        drop_columns: Vec<String>,
    },
    /// Binary survived-at-threshold label from months + status columns.
    ///
    /// Label 1 when months >= threshold; label 0 when months < threshold
    /// and the patient is dead; patients still alive with follow-up
    /// shorter than the threshold are censored and removed. Both columns
    /// are removed from the features.
    SurvivalAtThreshold {
        months_column: String,
        status_column: String,
        threshold_months: u32,
        codes: StatusCodes,
    },
    /// Use an existing column as the class label; distinct unmasked
    /// values become classes in ascending order.
    Column { column: String },
}

fn features_without(d: &Dataset, removed: &[usize]) -> Dataset {
    let keep: Vec<usize> = (0..d.n_attributes()).filter(|c| !removed.contains(c)).collect();
    d.select_columns(&keep)
}

/// Derive a [`LabeledDataset`] from a raw table.
pub fn derive_label(d: &Dataset, spec: &LabelSpec) -> Result<LabeledDataset> {
    match spec {
        LabelSpec::Stage {
            column,
            keep_stages,
            drop_columns,
        } => {
            let stage_col = d.column_index(column)?;
            let mut removed = vec![stage_col];
            for name in drop_columns {
                removed.push(d.column_index(name)?);
            }

            let mut stages: Vec<i64> = keep_stages.clone();
            stages.sort_unstable();
            stages.dedup();

            let mut rows = Vec::new();
            let mut labels = Vec::new();
            for r in 0..d.n_samples() {
                let Some(v) = d.get(r, stage_col) else { continue };
                let stage = v as i64;
                if let Some(class) = stages.iter().position(|&s| s == stage) {
                    rows.push(r);
                    labels.push(class);
                }
            }
            if rows.is_empty() {
                return Err(Error::EmptyLabelSubset);
            }
            let features = features_without(d, &removed).select_rows(&rows);
            let class_names = stages.iter().map(|s| format!("stage{s}")).collect();
            LabeledDataset::new(features, labels, class_names)
        }
        LabelSpec::SurvivalAtThreshold {
            months_column,
            status_column,
            threshold_months,
            codes,
        } => {
            let months_col = d.column_index(months_column)?;
            let status_col = d.column_index(status_column)?;
            let removed = vec![months_col, status_col];
            let threshold = f64::from(*threshold_months);

            let mut rows = Vec::new();
            let mut labels = Vec::new();
            for r in 0..d.n_samples() {
                let (Some(months), Some(status)) = (d.get(r, months_col), d.get(r, status_col))
                else {
                    continue;
                };
                if months >= threshold {
                    rows.push(r);
                    labels.push(1);
                } else if status != codes.alive {
                    rows.push(r);
                    labels.push(0);
                }
                // alive with months < threshold: censored, excluded
            }
            if rows.is_empty() {
                return Err(Error::EmptyLabelSubset);
            }
            let features = features_without(d, &removed).select_rows(&rows);
            LabeledDataset::new(
                features,
                labels,
                vec!["not_survived".into(), "survived".into()],
            )
        }
        LabelSpec::Column { column } => {
            let col = d.column_index(column)?;
            let mut distinct: Vec<f64> = Vec::new();
            for r in 0..d.n_samples() {
                if let Some(v) = d.get(r, col) {
                    if !distinct.contains(&v) {
                        distinct.push(v);
                    }
                }
            }
            distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if distinct.is_empty() {
                return Err(Error::EmptyLabelSubset);
            }

            let mut rows = Vec::new();
            let mut labels = Vec::new();
            for r in 0..d.n_samples() {
                if let Some(v) = d.get(r, col) {
                    rows.push(r);
                    labels.push(distinct.iter().position(|&x| x == v).unwrap());
                }
            }
            let features = features_without(d, &[col]).select_rows(&rows);
            let class_names = distinct
                .iter()
                .map(|v| crate::data::csv_io::format_value(*v))
                .collect();
            LabeledDataset::new(features, labels, class_names)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::AttributeKind;

    fn stage_table() -> Dataset {
        // columns: marker, stage
        let stages = [1.0, 2.0, 3.0, 4.0, 2.0];
        let mut values = Vec::new();
        for (i, &s) in stages.iter().enumerate() {
            values.push(i as f64);
            values.push(s);
        }
        Dataset::dense(
            vec!["marker".into(), "stage".into()],
            vec![AttributeKind::Continuous; 2],
            (0..5).map(|r| r.to_string()).collect(),
            values,
        )
        .unwrap()
    }

    #[test]
    fn stage_subset_filters_and_relabels() {
        let d = stage_table();
        let ld = derive_label(
            &d,
            &LabelSpec::Stage {
                column: "stage".into(),
                keep_stages: vec![2, 3],
                drop_columns: vec![],
            },
        )
        .unwrap();
        assert_eq!(ld.n_samples(), 3);
        assert_eq!(ld.labels, vec![0, 1, 0]);
        assert_eq!(ld.class_names, vec!["stage2", "stage3"]);
        assert_eq!(ld.dataset.attribute_names, vec!["marker"]);
    }

    #[test]
    fn empty_stage_subset_is_an_error() {
        let d = stage_table();
        let err = derive_label(
            &d,
            &LabelSpec::Stage {
                column: "stage".into(),
                keep_stages: vec![5],
                drop_columns: vec![],
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyLabelSubset));
    }

    #[test]
    fn survival_threshold_labels_by_months() {
        let d = Dataset::dense(
            vec!["x".into(), "months".into(), "status".into()],
            vec![AttributeKind::Continuous; 3],
            vec!["0".into(), "1".into()],
            vec![0.5, 10.0, 1.0, 0.7, 70.0, 0.0],
        )
        .unwrap();
        let ld = derive_label(
            &d,
            &LabelSpec::SurvivalAtThreshold {
                months_column: "months".into(),
                status_column: "status".into(),
                threshold_months: 60,
                codes: StatusCodes::default(),
            },
        )
        .unwrap();
        assert_eq!(ld.labels, vec![0, 1]);
        assert_eq!(ld.dataset.attribute_names, vec!["x"]);
    }

    #[test]
    fn censored_records_are_excluded() {
        // alive at 40 months with threshold 60: unknown outcome
        let d = Dataset::dense(
            vec!["x".into(), "months".into(), "status".into()],
            vec![AttributeKind::Continuous; 3],
            vec!["0".into(), "1".into(), "2".into()],
            vec![
                0.5, 40.0, 0.0, // censored
                0.7, 40.0, 1.0, // dead before threshold
                0.9, 61.0, 0.0, // survived
            ],
        )
        .unwrap();
        let ld = derive_label(
            &d,
            &LabelSpec::SurvivalAtThreshold {
                months_column: "months".into(),
                status_column: "status".into(),
                threshold_months: 60,
                codes: StatusCodes::default(),
            },
        )
        .unwrap();
        assert_eq!(ld.n_samples(), 2);
        assert_eq!(ld.labels, vec![0, 1]);
        assert_eq!(ld.dataset.sample_ids, vec!["1", "2"]);
    }

    #[test]
    fn column_mode_codes_distinct_values_in_order() {
        let d = Dataset::dense(
            vec!["f".into(), "label".into()],
            vec![AttributeKind::Continuous, AttributeKind::Binary],
            (0..4).map(|r| r.to_string()).collect(),
            vec![0.1, 1.0, 0.2, 0.0, 0.3, 1.0, 0.4, 0.0],
        )
        .unwrap();
        let ld = derive_label(&d, &LabelSpec::Column { column: "label".into() }).unwrap();
        assert_eq!(ld.labels, vec![1, 0, 1, 0]);
        assert_eq!(ld.class_names, vec!["0", "1"]);
    }
}
