//! Supervised learning and anti-learning analysis toolkit.
//!
//! The crate bundles everything needed to study learners that perform
//! *worse* than chance on held-out data:
//!
//! - [`data`]: tabular datasets with explicit missing-value masks,
//!   imputation, correlation-based attribute reduction, label derivation,
//!   and seed-deterministic k-fold / holdout splits.
//! - [`synth`]: synthetic dataset generators, including a 12-attribute
//!   XOR/XAND composite whose subsamples push classifiers below chance.
//! - [`learners`]: five classifiers implemented from first principles
//!   (backprop MLP, CART, Naive Bayes, least-squares SVM, kNN) behind one
//!   train/predict contract.
//! - [`meta`]: prediction inversion, AdaBoost, bagging, and a statistical
//!   detector that classifies a dataset/learner pair as learning,
//!   anti-learning, or indistinguishable from guessing.
//! - [`survival`]: cohort filtering, empirical survival curves, and
//!   survived-at-threshold labels.
//! - [`experiments`]: deterministic experiment drivers producing
//!   plot-ready CSV/JSON tables.
//!
//! Every randomized operation takes an explicit 64-bit seed; sub-seeds
//! are derived per purpose by [`seeds::sub_seed`], so results are
//! reproducible regardless of execution order or parallelism.

pub mod data;
pub mod error;
pub mod experiments;
pub mod learners;
pub mod meta;
pub mod seeds;
pub mod survival;
pub mod synth;

pub use error::{Error, ErrorClass, Result};
