//! Split / fit / aggregate / refit.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::learners::{Learner, Predictor};
use crate::matrix::PredictionMatrix;
use crate::rng::{derive_seed, seeded};
use crate::sampler::ca::{run_chain_ca, CaHyper};
use crate::sampler::la::{run_chain_la, LaHyper};
use crate::sampler::PosteriorSamples;

/// Features (row-major `n × d`) and response.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    d: usize,
    y: Vec<f64>,
}

impl Dataset {
    pub fn new(features: Vec<f64>, d: usize, y: Vec<f64>) -> Result<Self> {
        let n = y.len();
        if n == 0 {
            return Err(Error::InvalidArgument("dataset has no rows".into()));
        }
        if features.len() != n * d {
            return Err(Error::DimensionMismatch(format!(
                "{n} responses need {} feature values for d = {d}, got {}",
                n * d,
                features.len()
            )));
        }
        if let Some(p) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("feature ({}, {})", p / d.max(1), p % d.max(1))));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("response row {i}")));
        }
        Ok(Self { features, d, y })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut features = Vec::with_capacity(indices.len() * self.d);
        let mut y = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            y.push(self.y[i]);
        }
        Self::new(features, self.d, y)
    }

    /// The feature matrix viewed as a prediction matrix of coordinate projections.
    pub fn design(&self) -> Result<PredictionMatrix> {
        PredictionMatrix::from_row_major(self.n(), self.d, self.features.clone())
    }
}

/// Smallest size allowed for either side of a split.
pub const MIN_PART_ROWS: usize = 2;

/// Default share of rows used to fit the stage-1 learners.
pub const DEFAULT_TRAIN_FRAC: f64 = 0.75;

/// Row indices of a train / aggregation partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub aggregate: Vec<usize>,
}

impl Split {
    /// Fails if a row appears on both sides or a row is missing.
    pub fn check_partition(&self, n: usize) -> Result<()> {
        let mut seen = vec![0u8; n];
        for &i in self.train.iter().chain(&self.aggregate) {
            if i >= n {
                return Err(Error::InvalidArgument(format!("split index {i} out of range for {n} rows")));
            }
            seen[i] += 1;
        }
        if let Some(i) = seen.iter().position(|c| *c != 1) {
            return Err(Error::InvalidArgument(format!(
                "row {i} appears {} times in the split",
                seen[i]
            )));
        }
        Ok(())
    }
}

/// Random partition into `⌈frac·n⌉` training rows and the rest.
pub fn split_indices(n: usize, frac: f64, seed: u64) -> Result<Split> {
    if !(frac > 0.0 && frac < 1.0) {
        return Err(Error::InvalidArgument(format!("split fraction {frac} must lie in (0, 1)")));
    }
    let n_train = (frac * n as f64).ceil() as usize;
    let n_agg = n.saturating_sub(n_train);
    if n_train < MIN_PART_ROWS || n_agg < MIN_PART_ROWS {
        return Err(Error::InvalidArgument(format!(
            "splitting {n} rows at {frac} gives parts of {n_train} and {n_agg}; each needs at least {MIN_PART_ROWS}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seeded(seed));
    let aggregate = order.split_off(n_train);
    Ok(Split {
        train: order,
        aggregate,
    })
}

pub fn split_data(data: &Dataset, frac: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let s = split_indices(data.n(), frac, seed)?;
    Ok((data.subset(&s.train)?, data.subset(&s.aggregate)?))
}

/// `F[i][j] = f_j(X_i)`.
pub fn build_prediction_matrix(
    predictors: &[(String, Box<dyn Predictor>)],
    data: &Dataset,
) -> Result<PredictionMatrix> {
    if predictors.is_empty() {
        return Err(Error::InvalidArgument("no predictors".into()));
    }
    let refs: Vec<(String, &dyn Predictor)> =
        predictors.iter().map(|(id, p)| (id.clone(), p.as_ref())).collect();
    prediction_matrix_refs(&refs, data)
}

/// Convex (`Ca`) or linear (`La`) aggregation with its sampler settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Ca(CaHyper),
    La(LaHyper),
}

impl Method {
    pub fn ca_defaults(m: usize) -> Result<Self> {
        Ok(Method::Ca(CaHyper::defaults(m)?))
    }

    pub fn la_defaults(m: usize) -> Result<Self> {
        Ok(Method::La(LaHyper::defaults(m)?))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Ca(_) => "ca",
            Method::La(_) => "la",
        }
    }

    /// Same settings with the prior resized to `m` learners.
    pub fn with_dim(self, m: usize) -> Result<Self> {
        Ok(match self {
            Method::Ca(mut h) => {
                h.dirichlet = h.dirichlet.with_dim(m)?;
                Method::Ca(h)
            }
            Method::La(mut h) => {
                h.dirichlet = h.dirichlet.with_dim(m)?;
                Method::La(h)
            }
        })
    }
}

/// Aggregation weights read off a posterior sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregation {
    /// Posterior mean of `λ` (CA) or posterior median of `θ` (LA).
    pub weights: Vec<f64>,
    pub samples: PosteriorSamples,
}

impl Aggregation {
    /// `Σ_j w_j F[i][j]` for every row of `f`.
    pub fn predict_matrix(&self, f: &PredictionMatrix) -> Result<Vec<f64>> {
        if f.cols() != self.weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for a matrix with {} columns",
                self.weights.len(),
                f.cols()
            )));
        }
        Ok(f.mul_vec(&self.weights))
    }
}

/// Run the aggregation chain on a prediction matrix.
pub fn aggregate_matrix(
    f: &PredictionMatrix,
    y: &[f64],
    method: &Method,
    seed: u64,
) -> Result<Aggregation> {
    let method = method.with_dim(f.cols())?;
    let (samples, weights) = match &method {
        Method::Ca(h) => {
            let s = run_chain_ca(y, f, h, seed)?;
            let w = s.posterior_mean();
            (s, w)
        }
        Method::La(h) => {
            let s = run_chain_la(y, f, h, seed)?;
            let w = s.posterior_median();
            (s, w)
        }
    };
    Ok(Aggregation { weights, samples })
}

/// Split, fit, aggregate and refit settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub method: Method,
    pub train_frac: f64,
    pub seed: u64,
}

/// The final predictor `x ↦ Σ_j w_j f̂_j^{(n)}(x)` with learners refit on all rows.
pub struct AggregatedModel {
    pub ids: Vec<String>,
    pub refit: Vec<Box<dyn Predictor>>,
    pub aggregation: Aggregation,
    pub split: Split,
}

impl AggregatedModel {
    pub fn weights(&self) -> &[f64] {
        &self.aggregation.weights
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        self.refit
            .iter()
            .zip(&self.aggregation.weights)
            .map(|(p, w)| w * p.predict(x))
            .sum()
    }

    /// Predictions of every refit learner, one column per learner.
    pub fn learner_predictions(&self, data: &Dataset) -> Result<PredictionMatrix> {
        let named: Vec<(String, &dyn Predictor)> = self
            .ids
            .iter()
            .cloned()
            .zip(self.refit.iter().map(|p| p.as_ref()))
            .collect();
        prediction_matrix_refs(&named, data)
    }

    /// `F_test w` computed through the refit learners.
    pub fn predict_dataset(&self, data: &Dataset) -> Result<Vec<f64>> {
        self.aggregation.predict_matrix(&self.learner_predictions(data)?)
    }
}

fn prediction_matrix_refs(predictors: &[(String, &dyn Predictor)], data: &Dataset) -> Result<PredictionMatrix> {
    let m = predictors.len();
    let mut values = Vec::with_capacity(data.n() * m);
    for i in 0..data.n() {
        for (id, p) in predictors {
            let v = p.predict(data.row(i));
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("learner '{id}' predicted {v} on row {i}")));
            }
            values.push(v);
        }
    }
    PredictionMatrix::from_row_major(data.n(), m, values)
}

fn fit_all(learners: &[Box<dyn Learner>], data: &Dataset, seed: u64) -> Result<Vec<(String, Box<dyn Predictor>)>> {
    learners
        .par_iter()
        .enumerate()
        .map(|(j, l)| {
            let id = l.id();
            l.fit(data, derive_seed(seed, LEARNER_STREAM + j as u64))
                .map(|p| (id, p))
        })
        .collect()
}

const SPLIT_STREAM: u64 = 1;
const CHAIN_STREAM: u64 = 2;
const LEARNER_STREAM: u64 = 1000;

/// Split → fit learners on the training part → aggregate on the held-out part →
/// refit learners on all rows.
pub fn aggregate(
    data: &Dataset,
    learners: &[Box<dyn Learner>],
    config: &PipelineConfig,
) -> Result<AggregatedModel> {
    if learners.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "aggregation needs at least 2 learners, got {}",
            learners.len()
        )));
    }
    let split = split_indices(data.n(), config.train_frac, derive_seed(config.seed, SPLIT_STREAM))?;
    split.check_partition(data.n())?;
    let train = data.subset(&split.train)?;
    let held = data.subset(&split.aggregate)?;

    let fitted = fit_all(learners, &train, config.seed)?;
    let f = build_prediction_matrix(&fitted, &held)?;
    let aggregation = aggregate_matrix(&f, held.y(), &config.method, derive_seed(config.seed, CHAIN_STREAM))?;

    let refit = fit_all(learners, data, config.seed)?;
    let (ids, refit) = refit.into_iter().unzip();
    Ok(AggregatedModel {
        ids,
        refit,
        aggregation,
        split,
    })
}
