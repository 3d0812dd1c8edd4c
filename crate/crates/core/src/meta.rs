//! Meta-learners and anti-learning diagnostics: prediction inversion,
//! AdaBoost, bagging, and a statistical detector that classifies a
//! dataset/learner pair as learning, anti-learning, or indistinguishable
//! from guessing.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{split_kfold, LabeledDataset};
use crate::error::{Error, Result};
use crate::learners::{predictions, train, Classifier, LearnerConfig, Prediction, TrainedModel};
use crate::seeds;

/// Wrapper returning the complement of a binary model's prediction.
#[derive(Debug, Clone)]
pub struct InvertedModel<M: Classifier> {
    inner: M,
}

impl<M: Classifier> InvertedModel<M> {
    pub fn new(inner: M) -> Result<Self> {
        if inner.n_classes() != 2 {
            return Err(Error::NotBinary(inner.n_classes()));
        }
        Ok(InvertedModel { inner })
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }

    pub fn into_inner(self) -> M {
        self.inner
    }
}

impl<M: Classifier> Classifier for InvertedModel<M> {
    fn n_classes(&self) -> usize {
        2
    }

    fn predict(&self, features: &[f64]) -> Result<Prediction> {
        let p = self.inner.predict(features)?;
        // single raw scores negate, per-class score vectors swap
        let scores = if p.scores.len() == 1 {
            vec![-p.scores[0]]
        } else {
            p.scores.into_iter().rev().collect()
        };
        Ok(Prediction {
            class: 1 - p.class,
            scores,
        })
    }
}

/// Invert a trained binary model.
pub fn invert(model: TrainedModel) -> Result<InvertedModel<TrainedModel>> {
    InvertedModel::new(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combination {
    /// Sign of the alpha-weighted sum of +/-1 member votes (binary).
    WeightedVote,
    /// Plain majority over member classes, ties to the lowest class.
    MajorityVote,
}

/// A committee of trained models.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub members: Vec<TrainedModel>,
    pub member_weights: Vec<f64>,
    pub combination: Combination,
    /// When set, each member's binary vote is complemented before
    /// combining (boosting wrapped around inverted learners).
    pub invert_members: bool,
    n_classes: usize,
}

impl Classifier for Ensemble {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn predict(&self, features: &[f64]) -> Result<Prediction> {
        match self.combination {
            Combination::WeightedVote => {
                let mut sum = 0.0;
                for (member, alpha) in self.members.iter().zip(&self.member_weights) {
                    let mut class = member.predict(features)?.class;
                    if self.invert_members {
                        class = 1 - class;
                    }
                    sum += alpha * (2.0 * class as f64 - 1.0);
                }
                Ok(Prediction {
                    class: usize::from(sum > 0.0),
                    scores: vec![sum],
                })
            }
            Combination::MajorityVote => {
                let mut votes = vec![0.0; self.n_classes];
                for member in &self.members {
                    let mut class = member.predict(features)?.class;
                    if self.invert_members {
                        class = 1 - class;
                    }
                    votes[class] += 1.0;
                }
                let mut best = 0usize;
                for (c, &v) in votes.iter().enumerate().skip(1) {
                    if v > votes[best] {
                        best = c;
                    }
                }
                let total = self.members.len() as f64;
                Ok(Prediction {
                    class: best,
                    scores: votes.into_iter().map(|v| v / total).collect(),
                })
            }
        }
    }
}

/// Per-round boosting diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostRound {
    pub epsilon: f64,
    pub alpha: f64,
    /// Sample-weight total after the round's reweighting.
    pub weight_sum: f64,
}

/// Member weight for a round with weighted error `epsilon`.
pub(crate) fn member_weight(epsilon: f64) -> f64 {
    let e = epsilon.clamp(1e-12, 1.0 - 1e-12);
    0.5 * ((1.0 - e) / e).ln()
}

const MAX_CONSECUTIVE_DISCARDS: usize = 5;

fn adaboost_impl(
    base: &LearnerConfig,
    rounds: usize,
    data: &LabeledDataset,
    seed: u64,
    invert_members: bool,
) -> Result<(Ensemble, Vec<BoostRound>)> {
    if data.n_classes() != 2 {
        return Err(Error::NotBinary(data.n_classes()));
    }
    if rounds == 0 {
        return Err(Error::Config("boosting needs at least one round".into()));
    }
    let n = data.n_samples();
    let mut weights = vec![1.0 / n as f64; n];
    let mut members = Vec::new();
    let mut alphas = Vec::new();
    let mut trace = Vec::new();
    let mut attempt = 0u64;
    let mut discards = 0usize;

    while members.len() < rounds {
        // weighted resample of n rows, then train on the resample
        let mut rng = seeds::rng_for(seed, "adaboost_resample", &[attempt]);
        let dist = WeightedIndex::new(&weights)
            .map_err(|e| Error::Invalid(format!("bad sample weights: {e}")))?;
        let rows: Vec<usize> = (0..n).map(|_| dist.sample(&mut rng)).collect();
        let resampled = data.select_rows(&rows);
        let trained = train(
            base,
            &resampled,
            seeds::sub_seed(seed, "adaboost_train", &[attempt]),
        );
        attempt += 1;
        let member = match trained {
            Ok(m) => m,
            Err(Error::SingleClass) => {
                // degenerate resample; treat like a discarded round
                discards += 1;
                if discards >= MAX_CONSECUTIVE_DISCARDS {
                    break;
                }
                continue;
            }
            Err(e) => return Err(e),
        };

        // weighted error over the original training set
        let preds = predictions(&member, data)?;
        let epsilon: f64 = preds
            .iter()
            .zip(&data.labels)
            .zip(&weights)
            .filter(|((p, l), _)| {
                let vote = if invert_members { 1 - **p } else { **p };
                vote != **l
            })
            .map(|(_, w)| w)
            .sum();

        if epsilon >= 0.5 {
            // alpha would be zero or negative; discard and resample
            discards += 1;
            if discards >= MAX_CONSECUTIVE_DISCARDS {
                break;
            }
            continue;
        }
        discards = 0;

        let alpha = member_weight(epsilon);
        // wrong samples gain weight, correct ones lose it
        for ((p, l), w) in preds.iter().zip(&data.labels).zip(weights.iter_mut()) {
            let vote = if invert_members { 1 - *p } else { *p };
            *w *= if vote != *l { alpha.exp() } else { (-alpha).exp() };
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }

        let stop = epsilon == 0.0;
        members.push(member);
        alphas.push(alpha);
        trace.push(BoostRound {
            epsilon,
            alpha,
            weight_sum: weights.iter().sum(),
        });
        if stop {
            break;
        }
    }

    if members.is_empty() {
        return Err(Error::Invalid(
            "boosting found no round with weighted error below one half".into(),
        ));
    }
    Ok((
        Ensemble {
            members,
            member_weights: alphas,
            combination: Combination::WeightedVote,
            invert_members,
            n_classes: 2,
        },
        trace,
    ))
}

/// AdaBoost over a binary base learner with weighted resampling.
pub fn adaboost(
    base: &LearnerConfig,
    rounds: usize,
    data: &LabeledDataset,
    seed: u64,
) -> Result<Ensemble> {
    adaboost_impl(base, rounds, data, seed, false).map(|(e, _)| e)
}

/// AdaBoost where every member's vote is complemented: boosting wrapped
/// around inverted base learners.
pub fn adaboost_inverting_base(
    base: &LearnerConfig,
    rounds: usize,
    data: &LabeledDataset,
    seed: u64,
) -> Result<Ensemble> {
    adaboost_impl(base, rounds, data, seed, true).map(|(e, _)| e)
}

/// AdaBoost plus per-round diagnostics.
pub fn adaboost_traced(
    base: &LearnerConfig,
    rounds: usize,
    data: &LabeledDataset,
    seed: u64,
) -> Result<(Ensemble, Vec<BoostRound>)> {
    adaboost_impl(base, rounds, data, seed, false)
}

pub(crate) fn bootstrap_indices(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

/// Bagging: each member trains on an n-sample bootstrap; majority vote.
pub fn bagging(
    base: &LearnerConfig,
    bags: usize,
    data: &LabeledDataset,
    seed: u64,
) -> Result<Ensemble> {
    if bags == 0 {
        return Err(Error::Config("bagging needs at least one bag".into()));
    }
    let n = data.n_samples();
    let mut members = Vec::with_capacity(bags);
    for bag in 0..bags as u64 {
        let mut rng = seeds::rng_for(seed, "bagging_bag", &[bag]);
        let rows = bootstrap_indices(n, &mut rng);
        let resampled = data.select_rows(&rows);
        members.push(train(
            base,
            &resampled,
            seeds::sub_seed(seed, "bagging_train", &[bag]),
        )?);
    }
    Ok(Ensemble {
        member_weights: vec![1.0; members.len()],
        members,
        combination: Combination::MajorityVote,
        invert_members: false,
        n_classes: data.n_classes(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Learning,
    AntiLearning,
    Indistinguishable,
}

/// Outcome of the anti-learning test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntiLearningVerdict {
    pub mean_test_accuracy: f64,
    pub n_predictions: usize,
    pub chance_level: f64,
    pub p_value_below_chance: f64,
    pub p_value_above_chance: f64,
    pub verdict: Verdict,
}

impl AntiLearningVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = vec![0.0; n + 1];
    for i in 1..=n {
        table[i] = table[i - 1] + (i as f64).ln();
    }
    table
}

/// P(X <= k) for X ~ Binomial(n, p), exact term-by-term summation.
pub fn binom_cdf_at_most(k: usize, n: usize, p: f64) -> f64 {
    if p <= 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return if k >= n { 1.0 } else { 0.0 };
    }
    let lf = ln_factorials(n);
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let sum: f64 = (0..=k.min(n))
        .map(|i| (lf[n] - lf[i] - lf[n - i] + i as f64 * lp + (n - i) as f64 * lq).exp())
        .sum();
    sum.min(1.0)
}

/// P(X >= k) for X ~ Binomial(n, p).
pub fn binom_cdf_at_least(k: usize, n: usize, p: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let lf = ln_factorials(n);
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let sum: f64 = (k..=n)
        .map(|i| (lf[n] - lf[i] - lf[n - i] + i as f64 * lp + (n - i) as f64 * lq).exp())
        .sum();
    sum.min(1.0)
}

/// Run `repeats` independent stratified k-fold cross-validations, pool
/// every out-of-fold prediction, and test the pooled correct-count
/// against the majority-class chance level with one-sided exact binomial
/// tests in both directions.
pub fn detect_antilearning(
    data: &LabeledDataset,
    base: &LearnerConfig,
    repeats: usize,
    k: usize,
    alpha: f64,
    seed: u64,
) -> Result<AntiLearningVerdict> {
    if data.n_classes() != 2 {
        return Err(Error::NotBinary(data.n_classes()));
    }
    if repeats == 0 {
        return Err(Error::Config("repeats must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config(format!("alpha must be in (0,1), got {alpha}")));
    }

    let mut correct = 0usize;
    let mut total = 0usize;
    for rep in 0..repeats as u64 {
        let plan = split_kfold(data, k, seeds::sub_seed(seed, "detect_fold", &[rep]), true)?;
        for (fold, (train_rows, test_rows)) in plan.rounds().into_iter().enumerate() {
            let train_set = data.select_rows(&train_rows);
            let test_set = data.select_rows(&test_rows);
            let model = train(
                base,
                &train_set,
                seeds::sub_seed(seed, "detect_train", &[rep, fold as u64]),
            )?;
            let preds = predictions(&model, &test_set)?;
            correct += preds
                .iter()
                .zip(&test_set.labels)
                .filter(|(p, l)| p == l)
                .count();
            total += test_set.n_samples();
        }
    }

    let chance_level = data.chance_level();
    let p_below = binom_cdf_at_most(correct, total, chance_level);
    let p_above = binom_cdf_at_least(correct, total, chance_level);
    let verdict = if p_below < alpha {
        Verdict::AntiLearning
    } else if p_above < alpha {
        Verdict::Learning
    } else {
        Verdict::Indistinguishable
    };

    Ok(AntiLearningVerdict {
        mean_test_accuracy: correct as f64 / total as f64,
        n_predictions: total,
        chance_level,
        p_value_below_chance: p_below,
        p_value_above_chance: p_above,
        verdict,
    })
}
