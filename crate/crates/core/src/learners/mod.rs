//! Five classifiers behind one train/predict contract: a backprop MLP,
//! CART, Gaussian/categorical Naive Bayes, a least-squares SVM, and kNN.

mod bayes;
mod cart;
mod knn;
mod lssvm;
pub mod mlp;

pub use lssvm::Kernel;
pub use mlp::{mlp_gradient, MlpNet, OutputMode};

use crate::data::LabeledDataset;
use crate::error::{Error, Result};

/// Class targets of the graded single-output encoding.
pub const GRADED_TARGETS: [f64; 4] = [0.2, 0.4, 0.6, 0.8];

#[derive(Debug, Clone, PartialEq)]
pub struct MlpConfig {
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: u32,
    pub output_mode: OutputMode,
    /// Weights and biases start uniform in [-init_scale, init_scale].
    pub init_scale: f64,
    /// Stop early once training loss drops to this value; 0 disables.
    pub loss_tol: f64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden_units: 5,
            learning_rate: 0.01,
            epochs: 2000,
            output_mode: OutputMode::Binary,
            init_scale: 0.5,
            loss_tol: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CartConfig {
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for CartConfig {
    fn default() -> Self {
        CartConfig {
            max_depth: 6,
            min_leaf: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NbConfig {
    pub laplace_alpha: f64,
}

impl Default for NbConfig {
    fn default() -> Self {
        NbConfig { laplace_alpha: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsSvmConfig {
    pub gamma: f64,
    pub kernel: Kernel,
}

impl Default for LsSvmConfig {
    fn default() -> Self {
        LsSvmConfig {
            gamma: 1.0,
            kernel: Kernel::Linear,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnnConfig {
    pub k: usize,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig { k: 1 }
    }
}

/// Algorithm choice plus hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub enum LearnerConfig {
    Mlp(MlpConfig),
    Cart(CartConfig),
    NaiveBayes(NbConfig),
    LsSvm(LsSvmConfig),
    Knn(KnnConfig),
}

impl LearnerConfig {
    pub fn algorithm(&self) -> &'static str {
        match self {
            LearnerConfig::Mlp(_) => "mlp",
            LearnerConfig::Cart(_) => "cart",
            LearnerConfig::NaiveBayes(_) => "naive_bayes",
            LearnerConfig::LsSvm(_) => "lssvm",
            LearnerConfig::Knn(_) => "knn",
        }
    }

    /// Default configuration for an algorithm name.
    pub fn by_name(name: &str) -> Result<LearnerConfig> {
        match name {
            "mlp" => Ok(LearnerConfig::Mlp(MlpConfig::default())),
            "cart" => Ok(LearnerConfig::Cart(CartConfig::default())),
            "naive_bayes" | "nb" => Ok(LearnerConfig::NaiveBayes(NbConfig::default())),
            "lssvm" | "svm" => Ok(LearnerConfig::LsSvm(LsSvmConfig::default())),
            "knn" => Ok(LearnerConfig::Knn(KnnConfig::default())),
            other => Err(Error::Config(format!("unknown algorithm '{other}'"))),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        match self {
            LearnerConfig::Mlp(c) => {
                if c.hidden_units == 0 || c.learning_rate <= 0.0 || c.epochs == 0 {
                    return bad("mlp hyperparameters must be strictly positive");
                }
                if c.init_scale <= 0.0 || c.loss_tol < 0.0 {
                    return bad("mlp init_scale must be positive and loss_tol non-negative");
                }
            }
            LearnerConfig::Cart(c) => {
                if c.min_leaf == 0 {
                    return bad("cart min_leaf must be strictly positive");
                }
            }
            LearnerConfig::NaiveBayes(c) => {
                if c.laplace_alpha <= 0.0 {
                    return bad("naive bayes laplace_alpha must be strictly positive");
                }
            }
            LearnerConfig::LsSvm(c) => {
                if c.gamma <= 0.0 {
                    return bad("lssvm gamma must be strictly positive");
                }
                if let Kernel::Rbf { sigma } = c.kernel {
                    if sigma <= 0.0 {
                        return bad("rbf sigma must be strictly positive");
                    }
                }
            }
            LearnerConfig::Knn(c) => {
                if c.k == 0 {
                    return bad("knn k must be strictly positive");
                }
            }
        }
        Ok(())
    }
}

/// A class decision plus the algorithm's raw per-output scores.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class: usize,
    pub scores: Vec<f64>,
}

/// Anything that maps a feature vector to a class.
pub trait Classifier {
    fn n_classes(&self) -> usize;
    fn predict(&self, features: &[f64]) -> Result<Prediction>;
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingMeta {
    pub epochs_run: Option<u32>,
    pub initial_loss: Option<f64>,
    pub final_loss: Option<f64>,
}

#[derive(Debug, Clone)]
pub(crate) enum ModelParams {
    Mlp(mlp::MlpModel),
    Cart(cart::CartModel),
    NaiveBayes(bayes::NbModel),
    LsSvm(lssvm::LsSvmModel),
    Knn(knn::KnnModel),
}

/// An immutable trained classifier.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub(crate) params: ModelParams,
    pub class_names: Vec<String>,
    pub feature_count: usize,
    pub meta: TrainingMeta,
}

impl TrainedModel {
    pub fn algorithm(&self) -> &'static str {
        match self.params {
            ModelParams::Mlp(_) => "mlp",
            ModelParams::Cart(_) => "cart",
            ModelParams::NaiveBayes(_) => "naive_bayes",
            ModelParams::LsSvm(_) => "lssvm",
            ModelParams::Knn(_) => "knn",
        }
    }

    /// Max-norm residual of the least-squares SVM's linear system at the
    /// stored solution, given the training labels; `None` for other
    /// algorithms.
    pub fn kkt_residual(&self, labels: &[usize]) -> Option<f64> {
        match &self.params {
            ModelParams::LsSvm(m) => Some(m.kkt_residual(labels)),
            _ => None,
        }
    }

    /// Text dump of hyperparameters and learned parameters.
    pub fn dump(&self) -> String {
        let body = match &self.params {
            ModelParams::Mlp(m) => m.dump(),
            ModelParams::Cart(m) => m.dump(),
            ModelParams::NaiveBayes(m) => m.dump(),
            ModelParams::LsSvm(m) => m.dump(),
            ModelParams::Knn(m) => m.dump(),
        };
        format!(
            "algorithm {}\nclasses {}\nfeatures {}\n{}",
            self.algorithm(),
            self.class_names.join(","),
            self.feature_count,
            body
        )
    }
}

impl Classifier for TrainedModel {
    fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    fn predict(&self, features: &[f64]) -> Result<Prediction> {
        if features.len() != self.feature_count {
            return Err(Error::DimensionMismatch {
                expected: self.feature_count,
                found: features.len(),
            });
        }
        match &self.params {
            ModelParams::Mlp(m) => m.predict(features),
            ModelParams::Cart(m) => m.predict(features),
            ModelParams::NaiveBayes(m) => m.predict(features),
            ModelParams::LsSvm(m) => m.predict(features),
            ModelParams::Knn(m) => m.predict(features),
        }
    }
}

/// Train one classifier on a fully observed labeled dataset.
pub fn train(config: &LearnerConfig, data: &LabeledDataset, seed: u64) -> Result<TrainedModel> {
    config.validate()?;
    if data.dataset.has_missing() {
        return Err(Error::MissingValues);
    }
    if data.n_samples() == 0 {
        return Err(Error::Invalid("empty training set".into()));
    }
    let present = data.class_counts().iter().filter(|&&c| c > 0).count();
    if present < 2 {
        return Err(Error::SingleClass);
    }

    let (params, meta) = match config {
        LearnerConfig::Mlp(c) => {
            let (m, meta) = mlp::train_mlp(c, data, seed)?;
            (ModelParams::Mlp(m), meta)
        }
        LearnerConfig::Cart(c) => (
            ModelParams::Cart(cart::train_cart(c, data)?),
            TrainingMeta::default(),
        ),
        LearnerConfig::NaiveBayes(c) => (
            ModelParams::NaiveBayes(bayes::train_nb(c, data)?),
            TrainingMeta::default(),
        ),
        LearnerConfig::LsSvm(c) => (
            ModelParams::LsSvm(lssvm::train_lssvm(c, data)?),
            TrainingMeta::default(),
        ),
        LearnerConfig::Knn(c) => (
            ModelParams::Knn(knn::train_knn(c, data)?),
            TrainingMeta::default(),
        ),
    };

    Ok(TrainedModel {
        params,
        class_names: data.class_names.clone(),
        feature_count: data.dataset.n_attributes(),
        meta,
    })
}

/// Decode a graded single-output score into a class index 0..3.
///
/// The score is clamped to [0, 1] and mapped to the nearest of the
/// targets 0.2/0.4/0.6/0.8; exact midpoints (0.3, 0.5, 0.7) break to the
/// lower class.
pub fn decode_graded(score: f64) -> usize {
    decode_graded_among(score, 4)
}

/// Nearest of the first `n_classes` graded targets, midpoint ties low.
pub(crate) fn decode_graded_among(score: f64, n_classes: usize) -> usize {
    debug_assert!((2..=4).contains(&n_classes));
    let s = score.clamp(0.0, 1.0);
    let mut best = 0usize;
    for c in 1..n_classes {
        // strictly closer only, so midpoints stay with the lower class
        if (s - GRADED_TARGETS[c]).abs() < (s - GRADED_TARGETS[best]).abs() {
            best = c;
        }
    }
    best
}

/// Index of the largest score; ties go to the lowest index.
pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0usize;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Predicted classes for every row of a dataset.
pub fn predictions(model: &dyn Classifier, data: &LabeledDataset) -> Result<Vec<usize>> {
    (0..data.n_samples())
        .map(|r| Ok(model.predict(&data.dataset.row(r)?)?.class))
        .collect()
}

/// Fraction of rows the model classifies correctly.
pub fn accuracy(model: &dyn Classifier, data: &LabeledDataset) -> Result<f64> {
    let preds = predictions(model, data)?;
    let correct = preds
        .iter()
        .zip(&data.labels)
        .filter(|(p, l)| p == l)
        .count();
    Ok(correct as f64 / data.n_samples() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn decode_graded_nearest_and_ties() {
        assert_eq!(decode_graded(0.31), 1);
        assert_eq!(decode_graded(0.5), 1);
        assert_eq!(decode_graded(-0.2), 0);
        assert_eq!(decode_graded(0.3), 0);
        assert_eq!(decode_graded(0.7), 2);
        assert_eq!(decode_graded(1.4), 3);
    }

    #[test]
    fn single_class_training_set_is_rejected() {
        let ld = synth::xor2().select_rows(&[0, 3]); // both label 0
        let err = train(&LearnerConfig::Knn(KnnConfig::default()), &ld, 1).unwrap_err();
        assert!(matches!(err, Error::SingleClass));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let ld = synth::xor2();
        let m = train(&LearnerConfig::Knn(KnnConfig::default()), &ld, 1).unwrap();
        assert!(matches!(
            m.predict(&[0.0, 1.0, 0.5]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn all_algorithms_are_deterministic() {
        let ld = synth::gen_learnable(60, 5).unwrap();
        let probe = synth::gen_learnable(30, 6).unwrap();
        let configs = [
            LearnerConfig::Mlp(MlpConfig {
                epochs: 50,
                ..MlpConfig::default()
            }),
            LearnerConfig::Cart(CartConfig::default()),
            LearnerConfig::NaiveBayes(NbConfig::default()),
            LearnerConfig::LsSvm(LsSvmConfig::default()),
            LearnerConfig::Knn(KnnConfig::default()),
        ];
        for config in &configs {
            let a = train(config, &ld, 33).unwrap();
            let b = train(config, &ld, 33).unwrap();
            let pa = predictions(&a, &probe).unwrap();
            let pb = predictions(&b, &probe).unwrap();
            assert_eq!(pa, pb, "{} not deterministic", config.algorithm());
        }
    }
}
