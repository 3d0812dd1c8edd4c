//! Seed-deterministic cross-validation plans and holdout splits.

use rand::seq::SliceRandom;

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::seeds;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanKind {
    KFold,
    Holdout,
}

/// Deterministic partition of sample indices into folds.
///
/// For k-fold plans `fold_assignment[i]` is the fold of sample `i` and
/// every fold appears exactly once as a test set. A holdout split is
/// represented with two folds: fold 0 trains, fold 1 tests.
#[derive(Debug, Clone, PartialEq)]
pub struct CVPlan {
    pub kind: PlanKind,
    pub k: usize,
    pub holdout_fraction: Option<f64>,
    pub seed: u64,
    pub stratified: bool,
    pub fold_assignment: Vec<usize>,
}

impl CVPlan {
    /// Sample indices assigned to `fold`.
    pub fn fold_indices(&self, fold: usize) -> Vec<usize> {
        self.fold_assignment
            .iter()
            .enumerate()
            .filter(|(_, &f)| f == fold)
            .map(|(i, _)| i)
            .collect()
    }

    /// (train, test) index pairs, one per evaluation round.
    ///
    /// K-fold yields k rounds, holding out each fold in turn; holdout
    /// yields the single (fold 0, fold 1) round.
    pub fn rounds(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        match self.kind {
            PlanKind::KFold => (0..self.k)
                .map(|f| {
                    let test = self.fold_indices(f);
                    let train = self
                        .fold_assignment
                        .iter()
                        .enumerate()
                        .filter(|(_, &g)| g != f)
                        .map(|(i, _)| i)
                        .collect();
                    (train, test)
                })
                .collect(),
            PlanKind::Holdout => vec![(self.fold_indices(0), self.fold_indices(1))],
        }
    }
}

/// Build a k-fold plan; shuffling is driven only by `seed`.
///
/// Fold sizes differ by at most one. Stratified plans deal each class's
/// shuffled indices round-robin with a fold cursor carried across
/// classes, which also keeps per-class fold counts within one.
pub fn split_kfold(ld: &LabeledDataset, k: usize, seed: u64, stratified: bool) -> Result<CVPlan> {
    let n = ld.n_samples();
    if k < 2 {
        return Err(Error::Config(format!("k must be >= 2, got {k}")));
    }
    if k > n {
        return Err(Error::TooManyFolds { k, n });
    }

    let mut assignment = vec![0usize; n];
    if stratified {
        let mut cursor = 0usize;
        for class in 0..ld.n_classes() {
            let mut members: Vec<usize> =
                (0..n).filter(|&i| ld.labels[i] == class).collect();
            let mut rng = seeds::rng_for(seed, "kfold", &[class as u64]);
            members.shuffle(&mut rng);
            for idx in members {
                assignment[idx] = cursor % k;
                cursor += 1;
            }
        }
    } else {
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = seeds::rng_for(seed, "kfold", &[]);
        order.shuffle(&mut rng);
        for (pos, idx) in order.into_iter().enumerate() {
            assignment[idx] = pos % k;
        }
    }

    Ok(CVPlan {
        kind: PlanKind::KFold,
        k,
        holdout_fraction: None,
        seed,
        stratified,
        fold_assignment: assignment,
    })
}

/// Random holdout split: test gets `round(fraction * n)` samples.
pub fn split_holdout(
    ld: &LabeledDataset,
    fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = ld.n_samples();
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Config(format!(
            "holdout fraction must be in (0, 1), got {fraction}"
        )));
    }
    let test_size = (fraction * n as f64).round() as usize;
    if test_size == 0 || test_size >= n {
        return Err(Error::DegenerateSplit {
            train: n - test_size.min(n),
            test: test_size,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seeds::rng_for(seed, "holdout", &[]);
    order.shuffle(&mut rng);
    let mut test: Vec<usize> = order[..test_size].to_vec();
    let mut train: Vec<usize> = order[test_size..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Wrap a holdout split as a two-fold plan (fold 0 trains, fold 1 tests).
pub fn holdout_plan(ld: &LabeledDataset, fraction: f64, seed: u64) -> Result<CVPlan> {
    let (_, test) = split_holdout(ld, fraction, seed)?;
    let mut assignment = vec![0usize; ld.n_samples()];
    for i in test {
        assignment[i] = 1;
    }
    Ok(CVPlan {
        kind: PlanKind::Holdout,
        k: 2,
        holdout_fraction: Some(fraction),
        seed,
        stratified: false,
        fold_assignment: assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{AttributeKind, Dataset, LabeledDataset};
    use proptest::prelude::*;

    fn labeled(n: usize, labels: Vec<usize>) -> LabeledDataset {
        let classes = labels.iter().max().unwrap() + 1;
        LabeledDataset::new(
            Dataset::dense(
                vec!["x".into()],
                vec![AttributeKind::Continuous],
                (0..n).map(|r| r.to_string()).collect(),
                (0..n).map(|r| r as f64).collect(),
            )
            .unwrap(),
            labels,
            (0..classes).map(|c| c.to_string()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn ten_samples_five_folds_of_two() {
        let ld = labeled(10, vec![0; 10]);
        let plan = split_kfold(&ld, 5, 42, false).unwrap();
        for f in 0..5 {
            assert_eq!(plan.fold_indices(f).len(), 2);
        }
    }

    #[test]
    fn stratified_folds_hold_one_of_each_class() {
        let labels = vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let ld = labeled(10, labels.clone());
        let plan = split_kfold(&ld, 5, 9, true).unwrap();
        for f in 0..5 {
            let fold = plan.fold_indices(f);
            assert_eq!(fold.len(), 2);
            let ones = fold.iter().filter(|&&i| labels[i] == 1).count();
            assert_eq!(ones, 1);
        }
    }

    #[test]
    fn same_seed_gives_identical_assignment() {
        let ld = labeled(23, (0..23).map(|i| i % 2).collect());
        let a = split_kfold(&ld, 4, 77, true).unwrap();
        let b = split_kfold(&ld, 4, 77, true).unwrap();
        assert_eq!(a.fold_assignment, b.fold_assignment);
        let c = split_kfold(&ld, 4, 78, true).unwrap();
        assert_ne!(a.fold_assignment, c.fold_assignment);
    }

    #[test]
    fn k_above_n_errors() {
        let ld = labeled(3, vec![0, 1, 0]);
        assert!(matches!(
            split_kfold(&ld, 4, 1, false),
            Err(Error::TooManyFolds { k: 4, n: 3 })
        ));
    }

    #[test]
    fn holdout_test_size_is_rounded_fraction() {
        let ld = labeled(100, (0..100).map(|i| i % 2).collect());
        let (train, test) = split_holdout(&ld, 0.33, 5).unwrap();
        assert_eq!(test.len(), 33);
        assert_eq!(train.len(), 67);
    }

    #[test]
    fn tiny_holdout_keeps_both_sides_nonempty() {
        let ld = labeled(3, vec![0, 1, 0]);
        let (train, test) = split_holdout(&ld, 0.33, 5).unwrap();
        assert_eq!(test.len(), 1);
        assert_eq!(train.len(), 2);
    }

    #[test]
    fn holdout_is_seed_deterministic() {
        let ld = labeled(50, (0..50).map(|i| i % 2).collect());
        assert_eq!(
            split_holdout(&ld, 0.33, 11).unwrap(),
            split_holdout(&ld, 0.33, 11).unwrap()
        );
    }

    #[test]
    fn degenerate_holdout_errors() {
        let ld = labeled(2, vec![0, 1]);
        assert!(matches!(
            split_holdout(&ld, 0.1, 3),
            Err(Error::DegenerateSplit { .. })
        ));
    }

    proptest! {
        #[test]
        fn folds_partition_all_indices(
            n in 4usize..200,
            k in 2usize..8,
            seed in any::<u64>(),
            stratified in any::<bool>(),
        ) {
            prop_assume!(k <= n);
            let labels: Vec<usize> = (0..n).map(|i| i % 2).collect();
            let ld = labeled(n, labels);
            let plan = split_kfold(&ld, k, seed, stratified).unwrap();

            // every index in exactly one fold
            prop_assert_eq!(plan.fold_assignment.len(), n);
            prop_assert!(plan.fold_assignment.iter().all(|&f| f < k));

            // fold sizes differ by at most one
            let sizes: Vec<usize> = (0..k).map(|f| plan.fold_indices(f).len()).collect();
            let min = *sizes.iter().min().unwrap();
            let max = *sizes.iter().max().unwrap();
            prop_assert!(max - min <= 1);

            // union of rounds' test sets is everything, disjoint by construction
            let mut seen = vec![false; n];
            for (train, test) in plan.rounds() {
                prop_assert_eq!(train.len() + test.len(), n);
                for &i in &test {
                    prop_assert!(!seen[i]);
                    seen[i] = true;
                }
            }
            prop_assert!(seen.iter().all(|&s| s));
        }

        #[test]
        fn holdout_partitions_disjointly(
            n in 4usize..200,
            fraction in 0.1f64..0.9,
            seed in any::<u64>(),
        ) {
            let ld = labeled(n, (0..n).map(|i| i % 2).collect());
            if let Ok((train, test)) = split_holdout(&ld, fraction, seed) {
                let mut all: Vec<usize> = train.iter().chain(test.iter()).copied().collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            }
        }
    }
}
