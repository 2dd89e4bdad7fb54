//! Multiclass (averaged) perceptron over sparse binary features.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::FeatureVector;

/// Dense `feature_count x class_count` weight matrix, row-major by feature.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearModel {
    class_count: usize,
    feature_count: usize,
    weights: Vec<f64>,
}

impl LinearModel {
    pub fn zeros(feature_count: usize, class_count: usize) -> Self {
        LinearModel {
            class_count,
            feature_count,
            weights: vec![0.0; feature_count * class_count],
        }
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn weight(&self, feature: usize, class: usize) -> f64 {
        self.weights[feature * self.class_count + class]
    }

    pub fn set_weight(&mut self, feature: usize, class: usize, value: f64) -> Result<()> {
        if feature >= self.feature_count || class >= self.class_count {
            return Err(Error::InvalidArgument(format!(
                "weight ({}, {}) outside {}x{}",
                feature, class, self.feature_count, self.class_count
            )));
        }
        if !value.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "weight {} is not finite",
                value
            )));
        }
        self.weights[feature * self.class_count + class] = value;
        Ok(())
    }

    /// Non-zero weights as `(feature, class, value)`, by feature then class.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0.0)
            .map(move |(i, &w)| (i / self.class_count, i % self.class_count, w))
    }

    fn row(&self, feature: usize) -> Option<&[f64]> {
        (feature < self.feature_count)
            .then(|| &self.weights[feature * self.class_count..(feature + 1) * self.class_count])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainOptions {
    pub epochs: usize,
    pub seed: u64,
    pub shuffle: bool,
    pub averaged: bool,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            epochs: 10,
            seed: 1,
            shuffle: true,
            averaged: true,
        }
    }
}

/// One score per class; features outside the model contribute nothing.
pub fn score(m: &LinearModel, v: &FeatureVector) -> Vec<f64> {
    let mut scores = vec![0.0; m.class_count];
    for row in v.indices().iter().filter_map(|&f| m.row(f)) {
        for (s, w) in scores.iter_mut().zip(row) {
            *s += w;
        }
    }
    scores
}

/// Index of the highest score; ties go to the lowest index.
fn argmax(scores: &[f64], candidates: impl Iterator<Item = usize>) -> Option<usize> {
    let mut best: Option<usize> = None;
    for c in candidates {
        if best.is_none_or(|b| scores[c] > scores[b]) {
            best = Some(c);
        }
    }
    best
}

pub fn predict(m: &LinearModel, v: &FeatureVector) -> usize {
    let scores = score(m, v);
    argmax(&scores, 0..scores.len()).unwrap_or(0)
}

/// Best class among `legal`, ties to the lowest index.
pub fn predict_legal(m: &LinearModel, v: &FeatureVector, legal: &[usize]) -> Result<usize> {
    if let Some(&c) = legal.iter().find(|&&c| c >= m.class_count) {
        return Err(Error::InvalidArgument(format!("class {} out of range", c)));
    }
    let scores = score(m, v);
    let mut sorted = legal.to_vec();
    sorted.sort_unstable();
    argmax(&scores, sorted.into_iter())
        .ok_or_else(|| Error::InvalidArgument("no legal class to choose from".into()))
}

pub fn train_classifier(
    instances: &[(FeatureVector, usize)],
    class_count: usize,
    feature_count: usize,
    opts: &TrainOptions,
) -> Result<LinearModel> {
    train_with_history(instances, class_count, feature_count, opts).map(|(m, _)| m)
}

/// Train and also return the number of mistakes made in each epoch.
///
/// The averaged model is the mean of the weights after every instance of
/// every epoch. It is computed lazily: `totals` accumulates each update
/// scaled by the number of instances seen before it, so the mean over `T`
/// snapshots is `w - totals / T`.
pub fn train_with_history(
    instances: &[(FeatureVector, usize)],
    class_count: usize,
    feature_count: usize,
    opts: &TrainOptions,
) -> Result<(LinearModel, Vec<usize>)> {
    if instances.is_empty() {
        return Err(Error::Training("no training instances".into()));
    }
    if opts.epochs == 0 {
        return Err(Error::InvalidArgument("epochs must be at least 1".into()));
    }
    for (v, class) in instances {
        if *class >= class_count {
            return Err(Error::InvalidArgument(format!(
                "class {} outside 0..{}",
                class, class_count
            )));
        }
        if let Some(&f) = v.indices().iter().find(|&&f| f >= feature_count) {
            return Err(Error::InvalidArgument(format!(
                "feature {} outside 0..{}",
                f, feature_count
            )));
        }
    }

    let mut model = LinearModel::zeros(feature_count, class_count);
    let mut totals = vec![0.0; model.weights.len()];
    let mut seen = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut order: Vec<usize> = (0..instances.len()).collect();
    let mut history = Vec::with_capacity(opts.epochs);

    for _ in 0..opts.epochs {
        if opts.shuffle {
            order.shuffle(&mut rng);
        }
        let mut mistakes = 0;
        for &i in &order {
            let (v, gold) = &instances[i];
            let guess = predict(&model, v);
            if guess != *gold {
                mistakes += 1;
                for &f in v.indices() {
                    let base = f * class_count;
                    model.weights[base + gold] += 1.0;
                    model.weights[base + guess] -= 1.0;
                    totals[base + gold] += seen;
                    totals[base + guess] -= seen;
                }
            }
            seen += 1.0;
        }
        history.push(mistakes);
    }

    if opts.averaged {
        for (w, u) in model.weights.iter_mut().zip(&totals) {
            *w -= u / seen;
        }
    }
    Ok((model, history))
}
