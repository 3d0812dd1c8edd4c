//! Synthetic dataset generators.
//!
//! The centerpiece is a 12-attribute binary dataset whose label is a
//! fixed composition of XOR and XAND (XNOR) over the attributes A..L.
//! Enumerating all 4096 attribute combinations gives a dataset that is
//! perfectly balanced and, when subsampled, drives learners below chance
//! on the unseen remainder. Two control generators (a linearly separable
//! task and a random-label task) provide the contrasting regimes.

use rand::Rng;

use crate::data::{AttributeKind, Dataset, LabeledDataset};
use crate::error::{Error, Result};
use crate::seeds;

/// Exactly 12 bits, positionally named A..L.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitVector12 {
    bits: [u8; 12],
}

impl BitVector12 {
    pub fn new(bits: [u8; 12]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Invalid("bits must be 0 or 1".into()));
        }
        Ok(BitVector12 { bits })
    }

    /// Bits of `index` (A is the most significant bit).
    pub fn from_index(index: u16) -> Self {
        let mut bits = [0u8; 12];
        for (pos, bit) in bits.iter_mut().enumerate() {
            *bit = ((index >> (11 - pos)) & 1) as u8;
        }
        BitVector12 { bits }
    }

    pub fn bits(&self) -> &[u8; 12] {
        &self.bits
    }
}

/// XAND (XNOR): true when neither or both operands are true.
pub fn xand(a: u8, b: u8) -> u8 {
    debug_assert!(a <= 1 && b <= 1);
    1 - (a ^ b)
}

/// Label of the 12-attribute composite rule:
/// `{[(A xor B) xor (C xand D)] xor [(E xor F) xand (G xand H)]} xor
///  {[(I xor J) xor (K xand L)]}`, evaluated exactly as bracketed.
pub fn composite_label(v: &BitVector12) -> u8 {
    let [a, b, c, d, e, f, g, h, i, j, k, l] = *v.bits();
    let left = ((a ^ b) ^ xand(c, d)) ^ xand(e ^ f, xand(g, h));
    let right = (i ^ j) ^ xand(k, l);
    left ^ right
}

fn binary_names(names: &[&str]) -> (Vec<String>, Vec<AttributeKind>) {
    (
        names.iter().map(|s| s.to_string()).collect(),
        vec![AttributeKind::Binary; names.len()],
    )
}

fn class01() -> Vec<String> {
    vec!["0".to_string(), "1".to_string()]
}

/// Full enumeration of the composite rule: 4096 rows in lexicographic
/// order of (A..L) with A as the most significant bit. No seed; the
/// dataset is a constant.
pub fn gen_composite_full() -> LabeledDataset {
    let (names, kinds) = binary_names(&["A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L"]);
    let mut values = Vec::with_capacity(4096 * 12);
    let mut labels = Vec::with_capacity(4096);
    for index in 0..4096u16 {
        let v = BitVector12::from_index(index);
        values.extend(v.bits().iter().map(|&b| f64::from(b)));
        labels.push(composite_label(&v) as usize);
    }
    let dataset = Dataset::dense(
        names,
        kinds,
        (0..4096).map(|i| i.to_string()).collect(),
        values,
    )
    .expect("constant enumeration is well-formed");
    LabeledDataset::new(dataset, labels, class01()).expect("labels are 0/1")
}

/// The four-point two-dimensional XOR dataset: label 1 when exactly one
/// operand is 1.
pub fn xor2() -> LabeledDataset {
    let (names, kinds) = binary_names(&["X", "Y"]);
    let mut values = Vec::with_capacity(8);
    let mut labels = Vec::with_capacity(4);
    for x in 0..2u8 {
        for y in 0..2u8 {
            values.push(f64::from(x));
            values.push(f64::from(y));
            labels.push((x ^ y) as usize);
        }
    }
    let dataset = Dataset::dense(names, kinds, (0..4).map(|i| i.to_string()).collect(), values)
        .expect("constant enumeration is well-formed");
    LabeledDataset::new(dataset, labels, class01()).expect("labels are 0/1")
}

/// Split off `round(fraction * n)` seed-chosen rows as a training set;
/// the remaining rows form the test set. Row order within each side is
/// the original dataset order.
pub fn subsample(
    ld: &LabeledDataset,
    fraction: f64,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset)> {
    let n = ld.n_samples();
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Config(format!(
            "subsample fraction must be in (0, 1), got {fraction}"
        )));
    }
    let train_size = (fraction * n as f64).round() as usize;
    if train_size == 0 || train_size >= n {
        return Err(Error::DegenerateSplit {
            train: train_size,
            test: n - train_size.min(n),
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    use rand::seq::SliceRandom;
    let mut rng = seeds::rng_for(seed, "subsample", &[]);
    order.shuffle(&mut rng);
    let mut train_rows: Vec<usize> = order[..train_size].to_vec();
    let mut test_rows: Vec<usize> = order[train_size..].to_vec();
    train_rows.sort_unstable();
    test_rows.sort_unstable();
    Ok((ld.select_rows(&train_rows), ld.select_rows(&test_rows)))
}

/// Learnable control: 12 uniform [0,1] attributes, label 1 when the sum
/// of the first two attributes exceeds 1. Linearly separable.
pub fn gen_learnable(n: usize, seed: u64) -> Result<LabeledDataset> {
    if n < 4 {
        return Err(Error::Config(format!("need n >= 4, got {n}")));
    }
    let mut rng = seeds::rng_for(seed, "learnable", &[]);
    let d = 12;
    let mut values = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..1.0)).collect();
        labels.push(usize::from(row[0] + row[1] > 1.0));
        values.extend(row);
    }
    let dataset = Dataset::dense(
        (0..d).map(|c| format!("x{c}")).collect(),
        vec![AttributeKind::Continuous; d],
        (0..n).map(|i| i.to_string()).collect(),
        values,
    )?;
    LabeledDataset::new(dataset, labels, class01())
}

/// Random control: uniform attributes and an independent fair-coin label.
pub fn gen_random_labels(n: usize, d: usize, seed: u64) -> Result<LabeledDataset> {
    if n < 2 || d < 1 {
        return Err(Error::Config(format!("need n >= 2 and d >= 1, got n={n} d={d}")));
    }
    let mut rng = seeds::rng_for(seed, "random_labels", &[]);
    let mut values = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        for _ in 0..d {
            values.push(rng.gen_range(0.0..1.0));
        }
        labels.push(usize::from(rng.gen_bool(0.5)));
    }
    let dataset = Dataset::dense(
        (0..d).map(|c| format!("x{c}")).collect(),
        vec![AttributeKind::Continuous; d],
        (0..n).map(|i| i.to_string()).collect(),
        values,
    )?;
    LabeledDataset::new(dataset, labels, class01())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent transcription of the composite rule used as a test
    /// oracle: boolean operators over a bit array, with XAND spelled out
    /// from its truth table.
    fn oracle(bits: &[u8; 12]) -> u8 {
        fn xand_tt(a: bool, b: bool) -> bool {
            matches!((a, b), (false, false) | (true, true))
        }
        let v: Vec<bool> = bits.iter().map(|&b| b == 1).collect();
        let (a, b, c, d, e, f, g, h, i, j, k, l) =
            (v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]);
        let t1 = (a != b) != xand_tt(c, d);
        let t2 = xand_tt(e != f, xand_tt(g, h));
        let t3 = (i != j) != xand_tt(k, l);
        u8::from((t1 != t2) != t3)
    }

    #[test]
    fn xand_truth_table() {
        assert_eq!(xand(0, 0), 1);
        assert_eq!(xand(1, 1), 1);
        assert_eq!(xand(0, 1), 0);
        assert_eq!(xand(1, 0), 0);
    }

    #[test]
    fn composite_label_hand_traces() {
        let zeros = BitVector12::new([0; 12]).unwrap();
        assert_eq!(composite_label(&zeros), 0);

        let mut one_a = [0u8; 12];
        one_a[0] = 1;
        assert_eq!(composite_label(&BitVector12::new(one_a).unwrap()), 1);

        let ones = BitVector12::new([1; 12]).unwrap();
        assert_eq!(composite_label(&ones), 0);
    }

    #[test]
    fn composite_label_matches_oracle_on_all_inputs() {
        for index in 0..4096u16 {
            let v = BitVector12::from_index(index);
            assert_eq!(composite_label(&v), oracle(v.bits()), "index {index}");
        }
    }

    #[test]
    fn composite_label_reduces_to_parity() {
        // Every XAND contributes one negation and the negations cancel
        // in pairs, so the whole rule collapses to 12-bit parity.
        for index in 0..4096u16 {
            let v = BitVector12::from_index(index);
            let parity = v.bits().iter().sum::<u8>() % 2;
            assert_eq!(composite_label(&v), parity);
        }
    }

    #[test]
    fn composite_label_is_invariant_under_pair_swaps() {
        let pairs = [(0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11)];
        for index in 0..4096u16 {
            let v = BitVector12::from_index(index);
            for (p, q) in pairs {
                let mut swapped = *v.bits();
                swapped.swap(p, q);
                let w = BitVector12::new(swapped).unwrap();
                assert_eq!(composite_label(&v), composite_label(&w));
            }
        }
    }

    #[test]
    fn full_enumeration_is_balanced_and_ordered() {
        let ld = gen_composite_full();
        assert_eq!(ld.n_samples(), 4096);
        assert_eq!(ld.dataset.n_attributes(), 12);
        let ones: usize = ld.labels.iter().sum();
        assert_eq!(ones, 2048);
        assert_eq!(ld.labels[0], 0); // all-zero row

        // lexicographic order with A as the most significant bit
        let row1: Vec<f64> = (0..12).map(|c| ld.dataset.value(1, c)).collect();
        assert_eq!(row1[11], 1.0);
        assert_eq!(row1[..11], [0.0; 11]);

        // label column equals composite_label applied row-wise
        for r in 0..4096 {
            let bits: [u8; 12] = core::array::from_fn(|c| ld.dataset.value(r, c) as u8);
            assert_eq!(ld.labels[r], composite_label(&BitVector12::new(bits).unwrap()) as usize);
        }
    }

    #[test]
    fn xor2_truth_table() {
        let ld = xor2();
        assert_eq!(ld.n_samples(), 4);
        let mut seen = Vec::new();
        for r in 0..4 {
            let x = ld.dataset.value(r, 0);
            let y = ld.dataset.value(r, 1);
            seen.push((x as u8, y as u8, ld.labels[r]));
            assert_eq!(ld.labels[r], ((x as u8) ^ (y as u8)) as usize);
        }
        assert!(seen.contains(&(0, 0, 0)));
        assert!(seen.contains(&(1, 0, 1)));
        assert!(seen.contains(&(0, 1, 1)));
        assert!(seen.contains(&(1, 1, 0)));
    }

    #[test]
    fn subsample_three_of_four() {
        let (train, test) = subsample(&xor2(), 0.75, 3).unwrap();
        assert_eq!(train.n_samples(), 3);
        assert_eq!(test.n_samples(), 1);
    }

    #[test]
    fn subsample_halves_the_enumeration() {
        let full = gen_composite_full();
        let (train, test) = subsample(&full, 0.5, 9).unwrap();
        assert_eq!(train.n_samples(), 2048);
        assert_eq!(test.n_samples(), 2048);
    }

    #[test]
    fn subsample_is_deterministic_and_partitions() {
        let full = gen_composite_full();
        let (a_train, a_test) = subsample(&full, 0.3, 5).unwrap();
        let (b_train, _) = subsample(&full, 0.3, 5).unwrap();
        assert_eq!(a_train.dataset.sample_ids, b_train.dataset.sample_ids);

        let mut ids: Vec<&String> = a_train
            .dataset
            .sample_ids
            .iter()
            .chain(a_test.dataset.sample_ids.iter())
            .collect();
        ids.sort_by_key(|s| s.parse::<usize>().unwrap());
        let expect: Vec<String> = (0..4096).map(|i| i.to_string()).collect();
        assert!(ids.iter().map(|s| s.as_str()).eq(expect.iter().map(|s| s.as_str())));
    }

    #[test]
    fn learnable_rule_is_the_two_attribute_sum() {
        let ld = gen_learnable(50, 4).unwrap();
        for r in 0..ld.n_samples() {
            let sum = ld.dataset.value(r, 0) + ld.dataset.value(r, 1);
            assert_eq!(ld.labels[r], usize::from(sum > 1.0));
        }
    }

    #[test]
    fn learnable_prior_is_near_half() {
        let ld = gen_learnable(10_000, 11).unwrap();
        let ones: usize = ld.labels.iter().sum();
        let prior = ones as f64 / 10_000.0;
        assert!((prior - 0.5).abs() < 0.05, "prior {prior}");
    }

    #[test]
    fn random_labels_shape_and_determinism() {
        let a = gen_random_labels(30, 7, 2).unwrap();
        assert_eq!(a.n_samples(), 30);
        assert_eq!(a.dataset.n_attributes(), 7);
        let b = gen_random_labels(30, 7, 2).unwrap();
        assert_eq!(a, b);
        let c = gen_random_labels(30, 7, 3).unwrap();
        assert_ne!(a, c);
    }
}
