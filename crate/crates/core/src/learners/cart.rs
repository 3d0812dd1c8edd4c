//! Classification tree with binary threshold splits chosen by Gini
//! impurity. Pre-pruned by max depth and minimum leaf size.

use crate::data::LabeledDataset;
use crate::error::Result;
use crate::learners::{argmax, Prediction};

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        class: usize,
        /// Training class fractions at this leaf.
        fractions: Vec<f64>,
        n: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct CartModel {
    root: Node,
    feature_names: Vec<String>,
    config: super::CartConfig,
}

fn gini(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / t;
            p * p
        })
        .sum::<f64>()
}

fn class_counts(labels: &[usize], rows: &[usize], n_classes: usize) -> Vec<usize> {
    let mut counts = vec![0usize; n_classes];
    for &r in rows {
        counts[labels[r]] += 1;
    }
    counts
}

struct Builder<'a> {
    data: &'a LabeledDataset,
    config: &'a super::CartConfig,
    n_classes: usize,
}

impl Builder<'_> {
    fn leaf(&self, rows: &[usize]) -> Node {
        let counts = class_counts(&self.data.labels, rows, self.n_classes);
        let n = rows.len();
        Node::Leaf {
            class: argmax(&counts.iter().map(|&c| c as f64).collect::<Vec<_>>()),
            fractions: counts.iter().map(|&c| c as f64 / n as f64).collect(),
            n,
        }
    }

    fn build(&self, rows: Vec<usize>, depth: usize) -> Node {
        let counts = class_counts(&self.data.labels, &rows, self.n_classes);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || depth >= self.config.max_depth || rows.len() < 2 * self.config.min_leaf {
            return self.leaf(&rows);
        }

        // Best (weighted child Gini, feature, threshold); scan features
        // and thresholds in order, strictly-better only, so the choice is
        // deterministic. Gini is concave, so no split is worse than the
        // parent; zero-gain splits are allowed because parity-style nodes
        // (xor) only separate two levels down.
        let mut best: Option<(f64, usize, f64)> = None;
        let n = rows.len();
        for feature in 0..self.data.dataset.n_attributes() {
            let mut ordered: Vec<(f64, usize)> = rows
                .iter()
                .map(|&r| (self.data.dataset.value(r, feature), self.data.labels[r]))
                .collect();
            ordered.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

            let mut left_counts = vec![0usize; self.n_classes];
            let mut right_counts = counts.clone();
            for i in 0..n - 1 {
                left_counts[ordered[i].1] += 1;
                right_counts[ordered[i].1] -= 1;
                if ordered[i].0 == ordered[i + 1].0 {
                    continue; // identical values cannot be separated
                }
                let left_n = i + 1;
                let right_n = n - left_n;
                if left_n < self.config.min_leaf || right_n < self.config.min_leaf {
                    continue;
                }
                let weighted = (left_n as f64 * gini(&left_counts, left_n)
                    + right_n as f64 * gini(&right_counts, right_n))
                    / n as f64;
                if best.map_or(true, |(b, _, _)| weighted < b) {
                    let threshold = (ordered[i].0 + ordered[i + 1].0) / 2.0;
                    best = Some((weighted, feature, threshold));
                }
            }
        }

        let Some((_, feature, threshold)) = best else {
            return self.leaf(&rows);
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&r| self.data.dataset.value(r, feature) <= threshold);
        Node::Split {
            feature,
            threshold,
            left: Box::new(self.build(left_rows, depth + 1)),
            right: Box::new(self.build(right_rows, depth + 1)),
        }
    }
}

pub(crate) fn train_cart(config: &super::CartConfig, data: &LabeledDataset) -> Result<CartModel> {
    let builder = Builder {
        data,
        config,
        n_classes: data.n_classes(),
    };
    let root = builder.build((0..data.n_samples()).collect(), 0);
    Ok(CartModel {
        root,
        feature_names: data.dataset.attribute_names.clone(),
        config: config.clone(),
    })
}

impl CartModel {
    pub fn predict(&self, features: &[f64]) -> Result<Prediction> {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { class, fractions, .. } => {
                    return Ok(Prediction {
                        class: *class,
                        scores: fractions.clone(),
                    })
                }
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if features[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    /// Indented rule-tree dump.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "max_depth {} min_leaf {}\n",
            self.config.max_depth, self.config.min_leaf
        );
        self.dump_node(&self.root, 0, &mut out);
        out
    }

    fn dump_node(&self, node: &Node, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match node {
            Node::Leaf { class, fractions, n } => {
                let fracs: Vec<String> = fractions.iter().map(|f| format!("{f:.3}")).collect();
                out.push_str(&format!("{pad}class {class} (n={n}, p=[{}])\n", fracs.join(",")));
            }
            Node::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                out.push_str(&format!(
                    "{pad}if {} <= {threshold:.4}\n",
                    self.feature_names[*feature]
                ));
                self.dump_node(left, indent + 1, out);
                out.push_str(&format!("{pad}else\n"));
                self.dump_node(right, indent + 1, out);
            }
        }
    }

    #[cfg(test)]
    fn check_structure(&self, node: &Node, depth: usize, max_depth: usize, min_leaf: usize) {
        match node {
            Node::Leaf { n, .. } => {
                assert!(depth <= max_depth, "leaf at depth {depth}");
                assert!(*n >= min_leaf, "leaf with {n} samples");
            }
            Node::Split { left, right, .. } => {
                self.check_structure(left, depth + 1, max_depth, min_leaf);
                self.check_structure(right, depth + 1, max_depth, min_leaf);
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn assert_invariants(&self) {
        self.check_structure(&self.root, 0, self.config.max_depth, self.config.min_leaf);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{accuracy, train, CartConfig, LearnerConfig, ModelParams};
    use crate::synth;

    fn cart(max_depth: usize, min_leaf: usize) -> LearnerConfig {
        LearnerConfig::Cart(CartConfig { max_depth, min_leaf })
    }

    #[test]
    fn unconstrained_tree_shatters_xor() {
        let ld = synth::xor2();
        let model = train(&cart(4, 1), &ld, 0).unwrap();
        assert_eq!(accuracy(&model, &ld).unwrap(), 1.0);
    }

    #[test]
    fn leaf_size_and_depth_bounds_hold() {
        let ld = synth::gen_random_labels(300, 6, 5).unwrap();
        let model = train(&cart(4, 7), &ld, 0).unwrap();
        match &model.params {
            ModelParams::Cart(m) => m.assert_invariants(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn consistent_data_reaches_full_training_accuracy() {
        let ld = synth::gen_learnable(120, 21).unwrap();
        let model = train(&cart(64, 1), &ld, 0).unwrap();
        assert_eq!(accuracy(&model, &ld).unwrap(), 1.0);
    }

    #[test]
    fn dump_is_an_indented_rule_tree() {
        let ld = synth::xor2();
        let model = train(&cart(4, 1), &ld, 0).unwrap();
        let dump = model.dump();
        assert!(dump.contains("if X <= ") || dump.contains("if Y <= "), "{dump}");
        assert!(dump.contains("class "));
    }
}
