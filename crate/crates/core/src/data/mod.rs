//! Tabular datasets: loading, cleaning, labeling, and splitting.

mod correlate;
mod csv_io;
mod impute;
mod label;
mod split;

pub use correlate::{correlation_filter, pearson, RemovalEntry, RemovalReason};
pub use csv_io::{load_csv, load_schema_overrides, write_labeled_csv};
pub use impute::{impute, missing_stats, ImputePolicy};
pub use label::{derive_label, LabelSpec, StatusCodes};
pub use split::{holdout_plan, split_holdout, split_kfold, CVPlan, PlanKind};

use crate::error::{Error, Result};

/// How an attribute's values are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    Continuous,
    /// Unmasked values are exactly 0 or 1.
    Binary,
    /// Integer codes assigned in first-appearance order.
    Categorical,
}

impl AttributeKind {
    pub fn name(self) -> &'static str {
        match self {
            AttributeKind::Continuous => "continuous",
            AttributeKind::Binary => "binary",
            AttributeKind::Categorical => "categorical",
        }
    }
}

impl std::str::FromStr for AttributeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "continuous" => Ok(AttributeKind::Continuous),
            "binary" => Ok(AttributeKind::Binary),
            "categorical" => Ok(AttributeKind::Categorical),
            other => Err(Error::Config(format!("unknown attribute kind '{other}'"))),
        }
    }
}

/// Rectangular feature table with an explicit missing-value mask.
///
/// `values` is row-major, `n_samples x n_attributes`. A masked cell's
/// numeric value is meaningless and must never be read; accessors return
/// `None` for masked cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub attribute_names: Vec<String>,
    pub attribute_kinds: Vec<AttributeKind>,
    pub sample_ids: Vec<String>,
    values: Vec<f64>,
    missing_mask: Vec<bool>,
    n_samples: usize,
    n_attributes: usize,
}

impl Dataset {
    /// Build a dataset from parallel value/mask matrices.
    pub fn new(
        attribute_names: Vec<String>,
        attribute_kinds: Vec<AttributeKind>,
        sample_ids: Vec<String>,
        values: Vec<f64>,
        missing_mask: Vec<bool>,
    ) -> Result<Self> {
        let n_attributes = attribute_names.len();
        let n_samples = sample_ids.len();
        if attribute_kinds.len() != n_attributes
            || values.len() != n_samples * n_attributes
            || missing_mask.len() != values.len()
        {
            return Err(Error::Invalid(
                "dataset dimensions are inconsistent".into(),
            ));
        }
        let d = Dataset {
            attribute_names,
            attribute_kinds,
            sample_ids,
            values,
            missing_mask,
            n_samples,
            n_attributes,
        };
        d.check_binary_columns()?;
        Ok(d)
    }

    /// Fully observed dataset (all-false mask).
    pub fn dense(
        attribute_names: Vec<String>,
        attribute_kinds: Vec<AttributeKind>,
        sample_ids: Vec<String>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let mask = vec![false; values.len()];
        Dataset::new(attribute_names, attribute_kinds, sample_ids, values, mask)
    }

    fn check_binary_columns(&self) -> Result<()> {
        for (c, kind) in self.attribute_kinds.iter().enumerate() {
            if *kind != AttributeKind::Binary {
                continue;
            }
            for r in 0..self.n_samples {
                if let Some(v) = self.get(r, c) {
                    if v != 0.0 && v != 1.0 {
                        return Err(Error::BadBinaryCell {
                            row: r,
                            column: self.attribute_names[c].clone(),
                            value: format!("{v}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_attributes(&self) -> usize {
        self.n_attributes
    }

    pub fn is_masked(&self, row: usize, col: usize) -> bool {
        self.missing_mask[row * self.n_attributes + col]
    }

    /// Value at (row, col), `None` when masked.
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        if self.is_masked(row, col) {
            None
        } else {
            Some(self.values[row * self.n_attributes + col])
        }
    }

    /// Value at (row, col) of a dataset known to be fully observed.
    ///
    /// Panics if the cell is masked; callers must impute or filter first.
    pub fn value(&self, row: usize, col: usize) -> f64 {
        assert!(
            !self.is_masked(row, col),
            "read of masked cell ({row}, {col})"
        );
        self.values[row * self.n_attributes + col]
    }

    pub fn has_missing(&self) -> bool {
        self.missing_mask.iter().any(|&m| m)
    }

    /// Dense feature row. Errors if any cell in the row is masked.
    pub fn row(&self, row: usize) -> Result<Vec<f64>> {
        (0..self.n_attributes)
            .map(|c| self.get(row, c).ok_or(Error::MissingValues))
            .collect()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.attribute_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    /// Unmasked values of one column.
    pub fn observed_column(&self, col: usize) -> Vec<f64> {
        (0..self.n_samples).filter_map(|r| self.get(r, col)).collect()
    }

    /// New dataset keeping only the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Dataset {
        let mut values = Vec::with_capacity(self.n_samples * cols.len());
        let mut mask = Vec::with_capacity(self.n_samples * cols.len());
        for r in 0..self.n_samples {
            for &c in cols {
                values.push(self.values[r * self.n_attributes + c]);
                mask.push(self.missing_mask[r * self.n_attributes + c]);
            }
        }
        Dataset {
            attribute_names: cols.iter().map(|&c| self.attribute_names[c].clone()).collect(),
            attribute_kinds: cols.iter().map(|&c| self.attribute_kinds[c]).collect(),
            sample_ids: self.sample_ids.clone(),
            values,
            missing_mask: mask,
            n_samples: self.n_samples,
            n_attributes: cols.len(),
        }
    }

    /// New dataset keeping only the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        let mut values = Vec::with_capacity(rows.len() * self.n_attributes);
        let mut mask = Vec::with_capacity(rows.len() * self.n_attributes);
        for &r in rows {
            let start = r * self.n_attributes;
            values.extend_from_slice(&self.values[start..start + self.n_attributes]);
            mask.extend_from_slice(&self.missing_mask[start..start + self.n_attributes]);
        }
        Dataset {
            attribute_names: self.attribute_names.clone(),
            attribute_kinds: self.attribute_kinds.clone(),
            sample_ids: rows.iter().map(|&r| self.sample_ids[r].clone()).collect(),
            values,
            missing_mask: mask,
            n_samples: rows.len(),
            n_attributes: self.n_attributes,
        }
    }

    pub(crate) fn set_cell(&mut self, row: usize, col: usize, value: f64) {
        let i = row * self.n_attributes + col;
        self.values[i] = value;
        self.missing_mask[i] = false;
    }

    pub(crate) fn mask_count(&self) -> usize {
        self.missing_mask.iter().filter(|&&m| m).count()
    }
}

/// Fraction of masked cells, overall and per attribute/sample.
#[derive(Debug, Clone, PartialEq)]
pub struct MissingReport {
    pub overall_fraction: f64,
    pub per_attribute_fraction: Vec<f64>,
    pub per_sample_fraction: Vec<f64>,
}

/// A dataset plus one resolved classification target.
///
/// Label columns are already removed from the feature table; labels are
/// class indices `0..n_classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub dataset: Dataset,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
}

impl LabeledDataset {
    pub fn new(dataset: Dataset, labels: Vec<usize>, class_names: Vec<String>) -> Result<Self> {
        if labels.len() != dataset.n_samples() {
            return Err(Error::Invalid("label count != sample count".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::Invalid(format!(
                "label {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        Ok(LabeledDataset {
            dataset,
            labels,
            class_names,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.dataset.n_samples()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Per-class sample counts.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Largest class prior; the accuracy of always guessing the majority.
    pub fn chance_level(&self) -> f64 {
        let counts = self.class_counts();
        let max = counts.into_iter().max().unwrap_or(0);
        max as f64 / self.n_samples() as f64
    }

    /// Subset of rows, preserving class names.
    pub fn select_rows(&self, rows: &[usize]) -> LabeledDataset {
        LabeledDataset {
            dataset: self.dataset.select_rows(rows),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            class_names: self.class_names.clone(),
        }
    }
}
