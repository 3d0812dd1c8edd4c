//! Naive Bayes: Gaussian likelihoods for continuous attributes,
//! Laplace-smoothed frequency tables for binary/categorical ones.

use crate::data::{AttributeKind, LabeledDataset};
use crate::error::Result;
use crate::learners::{argmax, Prediction};

const VAR_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone)]
enum FeatureModel {
    /// Per-class (mean, variance).
    Gaussian(Vec<(f64, f64)>),
    /// Per-class smoothed log probability for each observed value; values
    /// listed in `values`. An unseen value at prediction time gets the
    /// zero-count smoothed probability.
    Table {
        values: Vec<f64>,
        log_prob: Vec<Vec<f64>>,
        log_unseen: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct NbModel {
    log_prior: Vec<f64>,
    features: Vec<FeatureModel>,
    n_classes: usize,
    alpha: f64,
}

pub(crate) fn train_nb(config: &super::NbConfig, data: &LabeledDataset) -> Result<NbModel> {
    let n = data.n_samples();
    let n_classes = data.n_classes();
    let alpha = config.laplace_alpha;
    let counts = data.class_counts();
    let log_prior: Vec<f64> = counts
        .iter()
        .map(|&c| {
            if c == 0 {
                f64::NEG_INFINITY
            } else {
                (c as f64 / n as f64).ln()
            }
        })
        .collect();

    let mut features = Vec::with_capacity(data.dataset.n_attributes());
    for col in 0..data.dataset.n_attributes() {
        let kind = data.dataset.attribute_kinds[col];
        let column: Vec<f64> = (0..n).map(|r| data.dataset.value(r, col)).collect();
        let model = match kind {
            AttributeKind::Continuous => {
                let mut stats = Vec::with_capacity(n_classes);
                for class in 0..n_classes {
                    let values: Vec<f64> = (0..n)
                        .filter(|&r| data.labels[r] == class)
                        .map(|r| column[r])
                        .collect();
                    if values.is_empty() {
                        stats.push((0.0, VAR_FLOOR));
                        continue;
                    }
                    let m = values.iter().sum::<f64>() / values.len() as f64;
                    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>()
                        / values.len() as f64;
                    stats.push((m, var.max(VAR_FLOOR)));
                }
                FeatureModel::Gaussian(stats)
            }
            AttributeKind::Binary | AttributeKind::Categorical => {
                let mut values: Vec<f64> = if kind == AttributeKind::Binary {
                    vec![0.0, 1.0]
                } else {
                    let mut distinct: Vec<f64> = Vec::new();
                    for &v in &column {
                        if !distinct.contains(&v) {
                            distinct.push(v);
                        }
                    }
                    distinct
                };
                values.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let domain = values.len() as f64;

                let mut log_prob = Vec::with_capacity(n_classes);
                let mut log_unseen = Vec::with_capacity(n_classes);
                for class in 0..n_classes {
                    let class_rows: Vec<usize> =
                        (0..n).filter(|&r| data.labels[r] == class).collect();
                    let denom = class_rows.len() as f64 + alpha * domain;
                    let probs: Vec<f64> = values
                        .iter()
                        .map(|&v| {
                            let count =
                                class_rows.iter().filter(|&&r| column[r] == v).count() as f64;
                            ((count + alpha) / denom).ln()
                        })
                        .collect();
                    log_prob.push(probs);
                    log_unseen.push((alpha / denom).ln());
                }
                FeatureModel::Table {
                    values,
                    log_prob,
                    log_unseen,
                }
            }
        };
        features.push(model);
    }

    Ok(NbModel {
        log_prior,
        features,
        n_classes,
        alpha,
    })
}

fn log_gaussian(x: f64, mean: f64, var: f64) -> f64 {
    let d = x - mean;
    -0.5 * (2.0 * std::f64::consts::PI * var).ln() - d * d / (2.0 * var)
}

impl NbModel {
    /// Posterior class probabilities, normalized to sum to one.
    pub fn posterior(&self, features: &[f64]) -> Vec<f64> {
        let mut log_post = self.log_prior.clone();
        for (col, feature) in self.features.iter().enumerate() {
            let x = features[col];
            for class in 0..self.n_classes {
                log_post[class] += match feature {
                    FeatureModel::Gaussian(stats) => {
                        let (mean, var) = stats[class];
                        log_gaussian(x, mean, var)
                    }
                    FeatureModel::Table {
                        values,
                        log_prob,
                        log_unseen,
                    } => match values.iter().position(|&v| v == x) {
                        Some(i) => log_prob[class][i],
                        None => log_unseen[class],
                    },
                };
            }
        }
        // log-sum-exp normalization
        let max = log_post.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut post: Vec<f64> = log_post.iter().map(|&lp| (lp - max).exp()).collect();
        let sum: f64 = post.iter().sum();
        for p in &mut post {
            *p /= sum;
        }
        post
    }

    pub fn predict(&self, features: &[f64]) -> Result<Prediction> {
        let post = self.posterior(features);
        Ok(Prediction {
            class: argmax(&post),
            scores: post,
        })
    }

    pub fn dump(&self) -> String {
        let mut out = format!("laplace_alpha {}\n", self.alpha);
        out.push_str(&format!("log_prior {:?}\n", self.log_prior));
        for (col, feature) in self.features.iter().enumerate() {
            match feature {
                FeatureModel::Gaussian(stats) => {
                    out.push_str(&format!("feature {col} gaussian {stats:?}\n"));
                }
                FeatureModel::Table { values, log_prob, .. } => {
                    out.push_str(&format!(
                        "feature {col} table values={values:?} log_prob={log_prob:?}\n"
                    ));
                }
            }
        }
        out
    }
}
