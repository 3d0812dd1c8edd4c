//! Attribute reduction by expert drop-list and pairwise correlation.

use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalReason {
    Correlation,
    Expert,
}

/// One removed attribute; `r` is present for correlation removals only.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovalEntry {
    pub name: String,
    pub reason: RemovalReason,
    pub r: Option<f64>,
    /// Surviving attribute the removed one correlated with.
    pub against: Option<String>,
}

impl std::fmt::Display for RemovalEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.reason {
            RemovalReason::Expert => write!(f, "dropped {} reason=expert", self.name),
            RemovalReason::Correlation => {
                write!(f, "dropped {} reason=corr r={}", self.name, self.r.unwrap_or(f64::NAN))
            }
        }
    }
}

/// Pearson correlation coefficient of two equal-length columns.
///
/// Returns 0 when either column has zero variance: a constant column
/// carries no correlation signal.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

/// Remove the `drop_list` attributes, then greedily scan attribute pairs
/// in column order and remove the later column of every pair whose
/// absolute Pearson correlation reaches `threshold`.
///
/// The dataset must be fully observed. Returns the reduced dataset and
/// the removal log.
pub fn correlation_filter(
    d: &Dataset,
    threshold: f64,
    drop_list: &[String],
) -> Result<(Dataset, Vec<RemovalEntry>)> {
    if d.has_missing() {
        return Err(Error::MissingValues);
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::Config(format!(
            "correlation threshold must be in (0, 1], got {threshold}"
        )));
    }

    let mut log = Vec::new();
    let mut alive: Vec<bool> = vec![true; d.n_attributes()];
    for name in drop_list {
        let idx = d.column_index(name)?;
        if alive[idx] {
            alive[idx] = false;
            log.push(RemovalEntry {
                name: name.clone(),
                reason: RemovalReason::Expert,
                r: None,
                against: None,
            });
        }
    }

    let columns: Vec<Vec<f64>> = (0..d.n_attributes()).map(|c| d.observed_column(c)).collect();
    for i in 0..d.n_attributes() {
        if !alive[i] {
            continue;
        }
        for j in (i + 1)..d.n_attributes() {
            if !alive[j] {
                continue;
            }
            let r = pearson(&columns[i], &columns[j]);
            if r.abs() >= threshold {
                alive[j] = false;
                log.push(RemovalEntry {
                    name: d.attribute_names[j].clone(),
                    reason: RemovalReason::Correlation,
                    r: Some(r),
                    against: Some(d.attribute_names[i].clone()),
                });
            }
        }
    }

    let keep: Vec<usize> = (0..d.n_attributes()).filter(|&c| alive[c]).collect();
    Ok((d.select_columns(&keep), log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{AttributeKind, Dataset};
    use rand::Rng;

    fn two_cols(a: Vec<f64>, b: Vec<f64>) -> Dataset {
        let n = a.len();
        let mut values = Vec::with_capacity(2 * n);
        for i in 0..n {
            values.push(a[i]);
            values.push(b[i]);
        }
        Dataset::dense(
            vec!["a".into(), "b".into()],
            vec![AttributeKind::Continuous; 2],
            (0..n).map(|r| r.to_string()).collect(),
            values,
        )
        .unwrap()
    }

    #[test]
    fn identical_columns_drop_the_later_one() {
        let d = two_cols(vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]);
        let (reduced, log) = correlation_filter(&d, 0.9, &[]).unwrap();
        assert_eq!(reduced.attribute_names, vec!["a"]);
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].name, "b");
        assert!((log[0].r.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_negation_is_removed_too() {
        let d = two_cols(vec![1.0, 2.0, 3.0], vec![-1.0, -2.0, -3.0]);
        let (reduced, log) = correlation_filter(&d, 0.9, &[]).unwrap();
        assert_eq!(reduced.attribute_names, vec!["a"]);
        assert!((log[0].r.unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_random_columns_are_retained() {
        let mut rng = crate::seeds::rng_from(7);
        let n = 1000;
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        // direct-formula check that the two columns are uncorrelated
        assert!(pearson(&a, &b).abs() < 0.1);
        let d = two_cols(a, b);
        let (reduced, log) = correlation_filter(&d, 0.9, &[]).unwrap();
        assert_eq!(reduced.n_attributes(), 2);
        assert!(log.is_empty());
    }

    #[test]
    fn drop_list_removes_by_name_and_logs_expert() {
        let d = two_cols(vec![1.0, 2.0], vec![5.0, 9.0]);
        let (reduced, log) = correlation_filter(&d, 1.0, &["a".to_string()]).unwrap();
        assert_eq!(reduced.attribute_names, vec!["b"]);
        assert_eq!(format!("{}", log[0]), "dropped a reason=expert");
    }

    #[test]
    fn unknown_drop_name_errors() {
        let d = two_cols(vec![1.0, 2.0], vec![5.0, 9.0]);
        assert!(matches!(
            correlation_filter(&d, 0.9, &["zzz".to_string()]),
            Err(Error::UnknownAttribute(_))
        ));
    }

    #[test]
    fn threshold_one_removes_only_exact_duplicates_or_negations() {
        // near-duplicate column: |r| close to but not exactly 1
        let a = vec![1.0, 2.0, 3.0, 4.0];
        let b = vec![1.0, 2.0, 3.0, 4.2];
        let d = two_cols(a.clone(), b);
        let (reduced, _) = correlation_filter(&d, 1.0, &[]).unwrap();
        assert_eq!(reduced.n_attributes(), 2);

        let d2 = two_cols(a.clone(), a.iter().map(|v| 2.0 * v + 1.0).collect());
        let (reduced2, log2) = correlation_filter(&d2, 1.0, &[]).unwrap();
        assert_eq!(reduced2.n_attributes(), 1);
        assert!((log2[0].r.unwrap().abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_columns_never_correlate() {
        let d = two_cols(vec![3.0, 3.0, 3.0], vec![3.0, 3.0, 3.0]);
        let (reduced, _) = correlation_filter(&d, 1.0, &[]).unwrap();
        assert_eq!(reduced.n_attributes(), 2);
    }

    #[test]
    fn missing_values_are_rejected() {
        let d = Dataset::new(
            vec!["a".into()],
            vec![AttributeKind::Continuous],
            vec!["0".into()],
            vec![1.0],
            vec![true],
        )
        .unwrap();
        assert!(matches!(
            correlation_filter(&d, 0.9, &[]),
            Err(Error::MissingValues)
        ));
    }
}
