//! Block Metropolis-within-Gibbs samplers for Bayesian aggregation.
//!
//! Both samplers augment the simplex weights as `λ_j = T_j / ∑_k T_k` with
//! `T_j ~ Gamma(ρ, 1)` and run a random walk on `log T`. [`ca`] adds a Gibbs step for
//! the noise precision `φ`; [`la`] additionally updates the l1 scale `A` and the
//! sign vector `z` of the linear coefficients `θ_j = A z_j λ_j`.

pub mod ca;
pub mod la;
mod tuning;

pub use tuning::{StepTuner, WeightTuner, DEFAULT_TARGET_ACCEPTANCE, TUNING_GAIN, TUNING_WINDOW};

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};

/// Posterior of `φ` given the residual sum of squares: `Gamma(a0 + n/2, b0 + ssr/2)`
/// (shape, rate).
pub fn phi_posterior_params(a0: f64, b0: f64, n: usize, ssr: f64) -> (f64, f64) {
    (a0 + n as f64 / 2.0, b0 + 0.5 * ssr)
}

pub(crate) fn sample_gamma_rate<R: Rng + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, 1.0 / rate)
        .expect("gamma parameters are positive")
        .sample(rng)
}

/// Outcome of one Metropolis–Hastings update step. A block update makes one
/// proposal; a coordinate sweep makes one per coordinate.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MhOutcome {
    pub accepted: u64,
    pub proposed: u64,
    /// Log acceptance ratio of the last proposal.
    pub log_ratio: f64,
}

impl MhOutcome {
    pub fn single(accepted: bool, log_ratio: f64) -> Self {
        Self {
            accepted: u64::from(accepted),
            proposed: 1,
            log_ratio,
        }
    }

    pub fn any_accepted(&self) -> bool {
        self.accepted > 0
    }
}

/// Outcome of a `log T` update with per-coordinate acceptance flags (a single flag
/// for a joint proposal).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightOutcome {
    /// Random-walk proposals.
    pub total: MhOutcome,
    pub per_coordinate: Vec<bool>,
    /// Prior-refresh proposals, when enabled.
    pub refresh: Option<MhOutcome>,
}

/// How the `log T` block is proposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightUpdate {
    /// Perturb every `log T_j` at once and accept or reject jointly.
    Block,
    /// Sweep `j = 1..M`, perturbing and accepting one `log T_j` at a time.
    Coordinate,
}

/// `accept` iff `log U < log R`, with `log R ≥ 0` always accepted.
pub(crate) fn mh_accept<R: Rng + ?Sized>(log_ratio: f64, rng: &mut R) -> bool {
    if log_ratio >= 0.0 {
        return true;
    }
    let u = 1.0 - rng.random::<f64>();
    u.ln() < log_ratio
}

/// Check that `steps` has one entry, or one per coordinate for coordinate sweeps.
pub(crate) fn check_steps(steps: &[f64], update: WeightUpdate, dim: usize) -> Result<()> {
    let ok = match update {
        WeightUpdate::Block => steps.len() == 1,
        WeightUpdate::Coordinate => steps.len() == dim || steps.len() == 1,
    };
    if !ok {
        return Err(Error::DimensionMismatch(format!(
            "{} step sizes for a {update:?} update of {dim} weights",
            steps.len()
        )));
    }
    if let Some(b) = steps.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {b}")));
    }
    Ok(())
}

pub(crate) fn check_log_ratio(log_ratio: f64, block: &str) -> Result<f64> {
    if log_ratio.is_finite() {
        Ok(log_ratio)
    } else {
        Err(Error::NumericFailure(format!(
            "non-finite log acceptance ratio ({log_ratio}) in {block} update"
        )))
    }
}

/// Largest `log T_j` that may be exponentiated.
pub const LOG_T_CEILING: f64 = 700.0;

/// Accepted / proposed counts for one block.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BlockAcceptance {
    pub accepted: u64,
    pub proposed: u64,
}

impl BlockAcceptance {
    pub fn record(&mut self, accepted: bool) {
        self.proposed += 1;
        self.accepted += u64::from(accepted);
    }

    pub fn add(&mut self, outcome: &MhOutcome) {
        self.proposed += outcome.proposed;
        self.accepted += outcome.accepted;
    }

    pub fn rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }
}

/// Acceptance counts per block. `scale` and `signs` are only present for the linear
/// sampler.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AcceptanceRates {
    /// Random-walk `log T` proposals.
    pub weights: BlockAcceptance,
    /// Independence proposals of `T_j` from the prior (coordinate mode only).
    pub refresh: Option<BlockAcceptance>,
    pub scale: Option<BlockAcceptance>,
    /// Independence proposals of `log A` from its prior (linear sampler with refresh).
    pub scale_refresh: Option<BlockAcceptance>,
    pub signs: Option<BlockAcceptance>,
}

impl AcceptanceRates {
    pub fn add_weights(&mut self, outcome: &WeightOutcome) {
        self.weights.add(&outcome.total);
        if let Some(r) = &outcome.refresh {
            self.refresh.get_or_insert_with(Default::default).add(r);
        }
    }
}

/// Step sizes in force after burn-in.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSizes {
    /// Median of `weight_steps`.
    pub weights: f64,
    /// One entry for joint `log T` proposals, `M` for coordinate-wise ones.
    pub weight_steps: Vec<f64>,
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    Convex,
    Linear,
}

/// One stored state.
#[derive(Debug, Clone, PartialEq)]
pub struct Draw {
    /// `λ` for the convex sampler, `θ` for the linear one.
    pub coefficients: Vec<f64>,
    pub phi: f64,
    /// `A` (linear sampler only).
    pub scale: Option<f64>,
}

/// Post-burn-in draws of a single chain.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSamples {
    pub kind: ChainKind,
    pub draws: Vec<Draw>,
    pub acceptance: AcceptanceRates,
    pub burn_in_acceptance: AcceptanceRates,
    pub step_sizes: StepSizes,
    pub seed: u64,
}

impl PosteriorSamples {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.draws.first().map_or(0, |d| d.coefficients.len())
    }

    /// Trace of coefficient `j`.
    pub fn trace(&self, j: usize) -> Vec<f64> {
        self.draws.iter().map(|d| d.coefficients[j]).collect()
    }

    pub fn phi_trace(&self) -> Vec<f64> {
        self.draws.iter().map(|d| d.phi).collect()
    }

    pub fn scale_trace(&self) -> Option<Vec<f64>> {
        self.draws.iter().map(|d| d.scale).collect()
    }

    pub fn posterior_mean(&self) -> Vec<f64> {
        let m = self.dim();
        let mut mean = vec![0.0; m];
        for d in &self.draws {
            for (acc, v) in mean.iter_mut().zip(&d.coefficients) {
                *acc += v;
            }
        }
        let n = self.draws.len().max(1) as f64;
        mean.iter_mut().for_each(|v| *v /= n);
        mean
    }

    pub fn posterior_median(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|j| {
                let mut t = self.trace(j);
                t.sort_by(f64::total_cmp);
                quantile_sorted(&t, 0.5)
            })
            .collect()
    }
}

/// Linear interpolation between order statistics at position `(n−1)p`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSummary {
    pub mean: f64,
    pub median: f64,
    pub lo: f64,
    pub hi: f64,
}

impl CoefficientSummary {
    pub fn excludes_zero(&self) -> bool {
        self.lo > 0.0 || self.hi < 0.0
    }
}

/// Minimum number of stored draws [`summarize_posterior`] accepts.
pub const MIN_SUMMARY_DRAWS: usize = 100;

/// Per-coordinate mean, median and equal-tailed credible interval at `level`.
pub fn summarize_posterior(
    samples: &PosteriorSamples,
    level: f64,
) -> Result<Vec<CoefficientSummary>> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("level {level} must lie in (0, 1)")));
    }
    if samples.len() < MIN_SUMMARY_DRAWS {
        return Err(Error::InsufficientDraws {
            needed: MIN_SUMMARY_DRAWS,
            have: samples.len(),
        });
    }
    let tail = (1.0 - level) / 2.0;
    Ok((0..samples.dim())
        .map(|j| {
            let mut t = samples.trace(j);
            let mean = t.iter().sum::<f64>() / t.len() as f64;
            t.sort_by(f64::total_cmp);
            CoefficientSummary {
                mean,
                median: quantile_sorted(&t, 0.5),
                lo: quantile_sorted(&t, tail),
                hi: quantile_sorted(&t, 1.0 - tail),
            }
        })
        .collect())
}

/// Batch-means standard error of the mean of an autocorrelated series.
pub fn batch_means_se(series: &[f64], n_batches: usize) -> f64 {
    let n_batches = n_batches.max(2).min(series.len());
    let size = series.len() / n_batches;
    if size == 0 {
        return f64::NAN;
    }
    let means: Vec<f64> = series
        .chunks_exact(size)
        .take(n_batches)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / means.len() as f64;
    let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (means.len() - 1) as f64;
    (var / means.len() as f64).sqrt()
}

pub(crate) fn variance(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
}
