//! Missing-value statistics and single imputation.

use crate::data::{AttributeKind, Dataset, MissingReport};
use crate::error::{Error, Result};

/// Which average fills a masked cell.
///
/// `PerKind` (the default) uses the mean for continuous attributes and
/// the mode for binary/categorical ones. Forcing `Mean` or `Median` onto
/// a binary or categorical attribute would produce values outside the
/// attribute's code set, so those fall back to the mode there; `Median`
/// on continuous attributes averages the two middle values when the
/// count is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImputePolicy {
    #[default]
    PerKind,
    Mean,
    Median,
    Mode,
}

/// Exact masked-cell fractions.
pub fn missing_stats(d: &Dataset) -> MissingReport {
    let n = d.n_samples();
    let a = d.n_attributes();
    let total = (n * a) as f64;
    let masked = d.mask_count() as f64;

    let per_attribute_fraction = (0..a)
        .map(|c| (0..n).filter(|&r| d.is_masked(r, c)).count() as f64 / n as f64)
        .collect();
    let per_sample_fraction = (0..n)
        .map(|r| (0..a).filter(|&c| d.is_masked(r, c)).count() as f64 / a as f64)
        .collect();

    MissingReport {
        overall_fraction: if total == 0.0 { 0.0 } else { masked / total },
        per_attribute_fraction,
        per_sample_fraction,
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Median over a sorted copy; continuous attributes average the two
/// middle values for even counts, coded attributes take the lower middle
/// so the fill stays a valid code.
fn median(values: &[f64], kind: AttributeKind) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else if kind == AttributeKind::Continuous {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    } else {
        sorted[n / 2 - 1]
    }
}

/// Most frequent value; ties break to the lowest value.
fn mode(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best = sorted[0];
    let mut best_count = 0usize;
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        // Strict > keeps the lowest value on ties because of the sort.
        if j - i > best_count {
            best_count = j - i;
            best = v;
        }
        i = j;
    }
    best
}

/// Fill every masked cell with a per-attribute average.
///
/// Returns a new dataset with an all-false mask; unmasked cells are
/// preserved bit-exactly. Errors when an attribute has no observed values.
pub fn impute(d: &Dataset, policy: ImputePolicy) -> Result<Dataset> {
    let mut out = d.clone();
    for c in 0..d.n_attributes() {
        let observed = d.observed_column(c);
        let column_needs_fill = (0..d.n_samples()).any(|r| d.is_masked(r, c));
        if !column_needs_fill {
            continue;
        }
        if observed.is_empty() {
            return Err(Error::FullyMissingAttribute(d.attribute_names[c].clone()));
        }
        let kind = d.attribute_kinds[c];
        let fill = match (policy, kind) {
            (ImputePolicy::Mean, AttributeKind::Continuous)
            | (ImputePolicy::PerKind, AttributeKind::Continuous) => mean(&observed),
            (ImputePolicy::Median, _) => median(&observed, kind),
            _ => mode(&observed),
        };
        for r in 0..d.n_samples() {
            if d.is_masked(r, c) {
                out.set_cell(r, c, fill);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Dataset;
    use proptest::prelude::*;

    fn col(values: Vec<f64>, mask: Vec<bool>, kind: AttributeKind) -> Dataset {
        let n = values.len();
        Dataset::new(
            vec!["a".into()],
            vec![kind],
            (0..n).map(|r| r.to_string()).collect(),
            values,
            mask,
        )
        .unwrap()
    }

    #[test]
    fn overall_fraction_counts_masked_cells() {
        let d = Dataset::new(
            vec!["a".into(), "b".into()],
            vec![AttributeKind::Continuous; 2],
            vec!["0".into(), "1".into()],
            vec![1.0, 2.0, 3.0, 4.0],
            vec![false, true, false, false],
        )
        .unwrap();
        let r = missing_stats(&d);
        assert_eq!(r.overall_fraction, 0.25);
        assert_eq!(r.per_attribute_fraction, vec![0.0, 0.5]);
        assert_eq!(r.per_sample_fraction, vec![0.5, 0.0]);
    }

    #[test]
    fn no_masked_cells_means_zero_fractions() {
        let d = col(vec![1.0, 2.0], vec![false, false], AttributeKind::Continuous);
        let r = missing_stats(&d);
        assert_eq!(r.overall_fraction, 0.0);
        assert!(r.per_attribute_fraction.iter().all(|&f| f == 0.0));
        assert!(r.per_sample_fraction.iter().all(|&f| f == 0.0));
    }

    #[test]
    fn fully_masked_dataset_has_fraction_one() {
        let d = col(vec![0.0, 0.0], vec![true, true], AttributeKind::Continuous);
        assert_eq!(missing_stats(&d).overall_fraction, 1.0);
    }

    #[test]
    fn mean_fills_continuous_gap() {
        let d = col(vec![1.0, 0.0, 3.0], vec![false, true, false], AttributeKind::Continuous);
        let filled = impute(&d, ImputePolicy::Mean).unwrap();
        assert_eq!(filled.value(1, 0), 2.0);
        assert!(!filled.has_missing());
        // the input is untouched
        assert!(d.is_masked(1, 0));
    }

    #[test]
    fn mode_fills_binary_majority() {
        let d = col(
            vec![1.0, 1.0, 0.0, 0.0],
            vec![false, false, false, true],
            AttributeKind::Binary,
        );
        let filled = impute(&d, ImputePolicy::Mode).unwrap();
        assert_eq!(filled.value(3, 0), 1.0);
    }

    #[test]
    fn mode_tie_breaks_to_lowest_value() {
        let d = col(
            vec![0.0, 1.0, 0.0],
            vec![false, false, true],
            AttributeKind::Binary,
        );
        let filled = impute(&d, ImputePolicy::PerKind).unwrap();
        assert_eq!(filled.value(2, 0), 0.0);
    }

    #[test]
    fn fully_missing_attribute_is_an_error() {
        let d = col(vec![0.0, 0.0], vec![true, true], AttributeKind::Continuous);
        assert!(matches!(
            impute(&d, ImputePolicy::PerKind),
            Err(Error::FullyMissingAttribute(_))
        ));
    }

    #[test]
    fn stats_after_impute_are_zero() {
        let d = col(vec![1.0, 0.0, 3.0], vec![false, true, false], AttributeKind::Continuous);
        let filled = impute(&d, ImputePolicy::PerKind).unwrap();
        assert_eq!(missing_stats(&filled).overall_fraction, 0.0);
    }

    proptest! {
        #[test]
        fn impute_is_idempotent_and_preserves_observed(
            values in proptest::collection::vec(-100.0f64..100.0, 2..40),
            mask_bits in proptest::collection::vec(any::<bool>(), 2..40),
        ) {
            let n = values.len().min(mask_bits.len());
            let mut mask = mask_bits[..n].to_vec();
            mask[0] = false; // keep at least one observed value
            let d = col(values[..n].to_vec(), mask.clone(), AttributeKind::Continuous);
            let once = impute(&d, ImputePolicy::PerKind).unwrap();
            let twice = impute(&once, ImputePolicy::PerKind).unwrap();
            prop_assert_eq!(&once, &twice);
            for r in 0..n {
                if !mask[r] {
                    prop_assert_eq!(once.value(r, 0).to_bits(), values[r].to_bits());
                }
            }
        }
    }
}
