//! Convex aggregation sampler (Dirichlet aggregation prior).
//!
//! Model: `Y_i = ∑_j λ_j F_ij + ε_i`, `ε_i ~ N(0, 1/φ)`, `λ_j = T_j / ∑_k T_k`,
//! `T_j ~ Gamma(ρ, 1)`, `φ ~ Gamma(a0, b0)`. One sweep is a Gibbs draw of `φ`
//! followed by a joint random-walk proposal on all `log T_j`.

use rand::Rng;

use super::{
    check_log_ratio, mh_accept, phi_posterior_params, sample_gamma_rate, AcceptanceRates,
    check_steps, ChainKind, Draw, MhOutcome, PosteriorSamples, StepSizes,
    WeightOutcome, WeightTuner, WeightUpdate, DEFAULT_TARGET_ACCEPTANCE, LOG_T_CEILING,
};
use statrs::function::gamma::ln_gamma;

use crate::dirichlet::{sample_log_gamma, softmax, DirichletHyper, SimplexWeights};
use crate::error::{Error, Result};
use crate::matrix::{sum_sq_resid, PredictionMatrix};
use crate::rng::seeded;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaHyper {
    pub dirichlet: DirichletHyper,
    /// Shape of the gamma prior on `φ`.
    pub a0: f64,
    /// Rate of the gamma prior on `φ`.
    pub b0: f64,
    /// Initial random-walk step for `log T`.
    pub beta: f64,
    pub n_iter: usize,
    pub burn_in: usize,
    pub target_acceptance: f64,
    /// Adapt `beta` during burn-in.
    pub adapt: bool,
    pub weight_update: WeightUpdate,
    /// In coordinate mode, follow each random-walk move with an independence proposal
    /// for `T_j` (see [`CoordinateSweep`]).
    pub prior_refresh: bool,
}

impl CaHyper {
    /// `α = 1, γ = 2, a0 = b0 = 0.01`, 2000 iterations with 1000 burn-in.
    pub fn defaults(dim: usize) -> Result<Self> {
        Ok(Self {
            dirichlet: DirichletHyper::default_for(dim)?,
            a0: 0.01,
            b0: 0.01,
            beta: 10.0,
            n_iter: 2000,
            burn_in: 1000,
            target_acceptance: DEFAULT_TARGET_ACCEPTANCE,
            adapt: true,
            weight_update: WeightUpdate::Coordinate,
            prior_refresh: true,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a0", self.a0), ("b0", self.b0), ("beta", self.beta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if self.burn_in >= self.n_iter {
            return Err(Error::InvalidArgument(format!(
                "burn_in ({}) must be smaller than n_iter ({})",
                self.burn_in, self.n_iter
            )));
        }
        if !(self.target_acceptance > 0.0 && self.target_acceptance < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "target acceptance {} must lie in (0, 1)",
                self.target_acceptance
            )));
        }
        Ok(())
    }
}

/// Current state of the convex chain with cached `λ`, `Fλ` and residual sum of squares.
#[derive(Debug, Clone, PartialEq)]
pub struct CaChainState {
    log_t: Vec<f64>,
    phi: f64,
    lambda: Vec<f64>,
    fitted: Vec<f64>,
    ssr: f64,
}

impl CaChainState {
    pub fn new(log_t: Vec<f64>, phi: f64, y: &[f64], f: &PredictionMatrix) -> Result<Self> {
        if log_t.len() != f.cols() {
            return Err(Error::DimensionMismatch(format!(
                "state has {} weights but F has {} columns",
                log_t.len(),
                f.cols()
            )));
        }
        if !(phi > 0.0 && phi.is_finite()) {
            return Err(Error::InvalidArgument(format!("phi must be positive, got {phi}")));
        }
        f.check_response(y)?;
        let lambda = weights_from_log_t(&log_t)?;
        let fitted = f.mul_vec(&lambda);
        let ssr = sum_sq_resid(y, &fitted);
        Ok(Self {
            log_t,
            phi,
            lambda,
            fitted,
            ssr,
        })
    }

    /// `log T_j = 0` (uniform weights) and `φ = 1 / var(Y)`.
    pub fn initial(y: &[f64], f: &PredictionMatrix) -> Result<Self> {
        Self::new(vec![0.0; f.cols()], initial_phi(y), y, f)
    }

    pub fn log_t(&self) -> &[f64] {
        &self.log_t
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn lambda(&self) -> SimplexWeights {
        SimplexWeights::new(self.lambda.clone()).expect("cached weights lie on the simplex")
    }

    pub fn lambda_values(&self) -> &[f64] {
        &self.lambda
    }

    pub fn fitted(&self) -> &[f64] {
        &self.fitted
    }

    pub fn ssr(&self) -> f64 {
        self.ssr
    }
}

pub(crate) fn initial_phi(y: &[f64]) -> f64 {
    let v = super::variance(y);
    if v > 0.0 && v.is_finite() {
        1.0 / v
    } else {
        1.0
    }
}

pub(crate) fn weights_from_log_t(log_t: &[f64]) -> Result<Vec<f64>> {
    if let Some(v) = log_t.iter().find(|v| **v > LOG_T_CEILING) {
        return Err(Error::NumericFailure(format!(
            "log T = {v} exceeds the exponentiation ceiling {LOG_T_CEILING}"
        )));
    }
    softmax(log_t)
}

/// `∑_j [(ρ−1) log T_j − T_j]`, the unnormalized gamma log prior on `T`.
pub(crate) fn log_prior_t(log_t: &[f64], rho: f64) -> f64 {
    log_t.iter().map(|u| (rho - 1.0) * u - u.exp()).sum()
}

/// Gibbs step: draw `φ ~ Gamma(a0 + n/2, b0 + ssr/2)` and store it.
pub fn gibbs_update_phi<R: Rng + ?Sized>(
    state: &mut CaChainState,
    y: &[f64],
    hyper: &CaHyper,
    rng: &mut R,
) -> f64 {
    let (shape, rate) = phi_posterior_params(hyper.a0, hyper.b0, y.len(), state.ssr);
    state.phi = sample_gamma_rate(shape, rate, rng);
    state.phi
}

/// A proposed `log T` with its log acceptance ratio.
#[derive(Debug, Clone)]
pub struct TProposal {
    pub log_ratio: f64,
    log_t: Vec<f64>,
    lambda: Vec<f64>,
    fitted: Vec<f64>,
    ssr: f64,
}

/// Build the proposal `log T^P = log T^O + β U` for given `U` and evaluate
///
/// ```text
/// log R = −φ/2 (SSR^P − SSR^O)
///       + ∑ [(ρ−1) log T^P − T^P] − ∑ [(ρ−1) log T^O − T^O]
///       + ∑ log T^P − ∑ log T^O
/// ```
pub fn propose_t(
    state: &CaChainState,
    offsets: &[f64],
    beta: f64,
    y: &[f64],
    f: &PredictionMatrix,
    rho: f64,
) -> Result<TProposal> {
    let log_t: Vec<f64> = state
        .log_t
        .iter()
        .zip(offsets)
        .map(|(u, o)| u + beta * o)
        .collect();
    let lambda = weights_from_log_t(&log_t)?;
    let fitted = f.mul_vec(&lambda);
    let ssr = sum_sq_resid(y, &fitted);
    let log_lik = -0.5 * state.phi * (ssr - state.ssr);
    let log_prior = log_prior_t(&log_t, rho) - log_prior_t(&state.log_t, rho);
    let log_jac = log_t.iter().sum::<f64>() - state.log_t.iter().sum::<f64>();
    Ok(TProposal {
        log_ratio: log_lik + log_prior + log_jac,
        log_t,
        lambda,
        fitted,
        ssr,
    })
}

impl CaChainState {
    pub fn accept(&mut self, p: TProposal) {
        self.log_t = p.log_t;
        self.lambda = p.lambda;
        self.fitted = p.fitted;
        self.ssr = p.ssr;
    }
}

pub(crate) fn uniform_offsets<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    (0..m).map(|_| rng.random::<f64>() - 0.5).collect()
}

/// Random-walk Metropolis–Hastings update of `log T`, either jointly or one
/// coordinate at a time depending on `hyper.weight_update`. `steps` holds one step
/// size, or one per coordinate in coordinate mode.
pub fn mh_update_t<R: Rng + ?Sized>(
    state: &mut CaChainState,
    y: &[f64],
    f: &PredictionMatrix,
    hyper: &CaHyper,
    steps: &[f64],
    rng: &mut R,
) -> Result<WeightOutcome> {
    check_steps(steps, hyper.weight_update, f.cols())?;
    let rho = hyper.dirichlet.rho();
    match hyper.weight_update {
        WeightUpdate::Block => {
            let offsets = uniform_offsets(f.cols(), rng);
            let proposal = propose_t(state, &offsets, steps[0], y, f, rho)?;
            let log_ratio = check_log_ratio(proposal.log_ratio, "T")?;
            let accepted = mh_accept(log_ratio, rng);
            if accepted {
                state.accept(proposal);
            }
            Ok(WeightOutcome {
                total: MhOutcome::single(accepted, log_ratio),
                per_coordinate: vec![accepted],
                refresh: None,
            })
        }
        WeightUpdate::Coordinate => {
            let mut ones = vec![1.0; f.cols()];
            let out = CoordinateSweep {
                log_t: &mut state.log_t,
                fitted: &mut state.fitted,
                ssr: &mut state.ssr,
                mult: &mut ones,
                flip_signs: false,
                phi: Some(state.phi),
                y,
                f,
                rho,
                scale: None,
            }
            .run(steps, hyper.prior_refresh, rng)?;
            state.lambda = weights_from_log_t(&state.log_t)?;
            state.fitted = f.mul_vec(&state.lambda);
            state.ssr = sum_sq_resid(y, &state.fitted);
            Ok(out)
        }
    }
}

/// Largest `log` growth factor of the remaining weights handled incrementally.
const RESCALE_LIMIT: f64 = 8.0;

fn log_add(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// Probability that a refresh proposal comes from the prior rather than the slab.
pub const REFRESH_PRIOR_WEIGHT: f64 = 0.5;

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Coordinate-wise `log T` moves against a fit `∑_j c_j λ_j F_j` with multipliers
/// `c_j`. `phi = None` drops the likelihood.
///
/// With `L` the log-sum-exp of `log T`, moving `log T_j` from `u` to `u'` changes
/// `L` to `L'` and the fit to `e^{L−L'} (fit − c_j e^{u−L} F_j) + c'_j e^{u'−L'} F_j`,
/// an `O(n)` update. The fit drifts by rounding over a sweep, so callers recompute
/// their caches afterwards.
pub struct CoordinateSweep<'a> {
    pub log_t: &'a mut [f64],
    pub fitted: &'a mut Vec<f64>,
    pub ssr: &'a mut f64,
    pub mult: &'a mut [f64],
    /// Let refresh proposals also draw a fresh sign for `c_j`.
    pub flip_signs: bool,
    pub phi: Option<f64>,
    pub y: &'a [f64],
    pub f: &'a PredictionMatrix,
    pub rho: f64,
    /// Linear sampler: `log A` with its Gamma `(c0, d0)` prior. Refresh proposals then
    /// rescale `A` by `S'/S` (`S = ∑ T_k`) so that every `θ_k`, `k ≠ j`, keeps its
    /// value and only `θ_j` moves. The map has unit Jacobian.
    pub scale: Option<ScaleCoupling<'a>>,
}

pub struct ScaleCoupling<'a> {
    pub log_a: &'a mut f64,
    pub c0: f64,
    pub d0: f64,
}

impl ScaleCoupling<'_> {
    fn log_prior(&self, log_a: f64) -> f64 {
        self.c0 * log_a - self.d0 * log_a.exp()
    }
}

/// Log-sum-exp of every `log T_k` except `k = j`.
fn log_sum_rest(log_t: &[f64], j: usize) -> f64 {
    log_t
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != j)
        .fold(f64::NEG_INFINITY, |acc, (_, u)| log_add(acc, *u))
}

impl CoordinateSweep<'_> {
    /// Likelihood part of the log ratio for `(log T_j, c_j) → (u_new, c_new)`; leaves
    /// the proposed fit in `proposal`.
    fn log_lik_diff(&mut self, j: usize, u_new: f64, c_new: f64, proposal: &mut [f64]) -> Result<f64> {
        let Some(phi) = self.phi else {
            return Ok(0.0);
        };
        let u_old = self.log_t[j];
        let rest = log_sum_rest(self.log_t, j);
        let l_old = log_add(rest, u_old);
        let l_new = log_add(rest, u_new);
        if l_old - l_new > RESCALE_LIMIT {
            // the dominant weight dropped: the incremental form would cancel
            self.log_t[j] = u_new;
            let lambda = softmax(self.log_t);
            self.log_t[j] = u_old;
            let mut theta: Vec<f64> = lambda?.iter().zip(&*self.mult).map(|(l, c)| l * c).collect();
            theta[j] = c_new * (u_new - l_new).exp();
            self.f.mul_vec_into(&theta, proposal);
        } else {
            let shrink = (l_old - l_new).exp();
            let w_old = self.mult[j] * (u_old - l_old).exp();
            let w_new = c_new * (u_new - l_new).exp();
            for (i, p) in proposal.iter_mut().enumerate() {
                let fij = self.f.get(i, j);
                *p = shrink * (self.fitted[i] - w_old * fij) + w_new * fij;
            }
        }
        Ok(-0.5 * phi * (sum_sq_resid(self.y, proposal) - *self.ssr))
    }

    fn settle<R: Rng + ?Sized>(
        &mut self,
        j: usize,
        (u_new, c_new): (f64, f64),
        log_ratio: f64,
        proposal: &mut Vec<f64>,
        rng: &mut R,
    ) -> Result<bool> {
        let log_ratio = check_log_ratio(log_ratio, "T")?;
        if !mh_accept(log_ratio, rng) {
            return Ok(false);
        }
        self.log_t[j] = u_new;
        self.mult[j] = c_new;
        if self.phi.is_some() {
            std::mem::swap(self.fitted, proposal);
            *self.ssr = sum_sq_resid(self.y, self.fitted);
        }
        Ok(true)
    }

    /// Refresh of `(log T_j, c_j)` with `log A` moved by `log S' − log S`.
    /// `θ_j` becomes `c_j' e^{u'} / S` in terms of the old `S`.
    fn refresh_fit_preserving<R: Rng + ?Sized>(
        &mut self,
        j: usize,
        (u_new, c_new): (f64, f64),
        proposal_terms: f64,
        proposal: &mut Vec<f64>,
        rng: &mut R,
    ) -> Result<bool> {
        let scale = self.scale.as_ref().expect("scale coupling present");
        let u_old = self.log_t[j];
        let rest = log_sum_rest(self.log_t, j);
        let ls_old = log_add(rest, u_old);
        let ls_new = log_add(rest, u_new);
        let log_a_new = *scale.log_a + (ls_new - ls_old);
        let mut log_ratio = proposal_terms + scale.log_prior(log_a_new) - scale.log_prior(*scale.log_a);
        if let Some(phi) = self.phi {
            let theta_old = self.mult[j] * (u_old - ls_old).exp();
            let theta_new = c_new * (u_new - ls_old).exp();
            let delta = theta_new - theta_old;
            for (i, p) in proposal.iter_mut().enumerate() {
                *p = self.fitted[i] + delta * self.f.get(i, j);
            }
            log_ratio += -0.5 * phi * (sum_sq_resid(self.y, proposal) - *self.ssr);
        }
        let log_ratio = check_log_ratio(log_ratio, "T")?;
        if !mh_accept(log_ratio, rng) {
            return Ok(false);
        }
        self.log_t[j] = u_new;
        let a_new = log_a_new.exp();
        for (k, c) in self.mult.iter_mut().enumerate() {
            let negative = if k == j { c_new.is_sign_negative() } else { c.is_sign_negative() };
            *c = if negative { -a_new } else { a_new };
        }
        if let Some(s) = self.scale.as_mut() {
            *s.log_a = log_a_new;
        }
        if self.phi.is_some() {
            std::mem::swap(self.fitted, proposal);
            *self.ssr = sum_sq_resid(self.y, self.fitted);
        }
        Ok(true)
    }

    /// `log p(u) = ρu − e^u` up to a constant: the density of `log T` for
    /// `T ~ Gamma(ρ, 1)`.
    fn log_prior(&self, u: f64) -> f64 {
        self.rho * u - u.exp()
    }

    /// Log density of the refresh proposal: a mixture of the prior of `log T_j` and a
    /// slab putting `λ_j` uniform on `(0, 1)` given the other coordinates.
    fn log_refresh_density(&self, u: f64, rest: f64) -> f64 {
        if rest == f64::NEG_INFINITY {
            // a single coordinate has no slab
            return self.log_prior(u) - ln_gamma(self.rho);
        }
        let x = u - rest;
        let slab = -softplus(-x) - softplus(x);
        log_add(
            REFRESH_PRIOR_WEIGHT.ln() + self.log_prior(u) - ln_gamma(self.rho),
            (1.0 - REFRESH_PRIOR_WEIGHT).ln() + slab,
        )
    }

    /// One pass over `j = 1..M`. Each coordinate gets a random-walk proposal
    /// `log T_j + β_j U_j` and, with `refresh`, an independence proposal that draws
    /// `log T_j` from the prior or sets `λ_j ~ Uniform(0, 1)` (with a fresh fair sign
    /// when `flip_signs`).
    pub fn run<R: Rng + ?Sized>(
        &mut self,
        steps: &[f64],
        refresh: bool,
        rng: &mut R,
    ) -> Result<WeightOutcome> {
        let m = self.log_t.len();
        let mut proposal = vec![0.0; self.y.len()];
        let mut out = WeightOutcome {
            total: MhOutcome::default(),
            per_coordinate: vec![false; m],
            refresh: refresh.then(MhOutcome::default),
        };
        for j in 0..m {
            let beta = if steps.len() == 1 { steps[0] } else { steps[j] };
            let step = beta * (rng.random::<f64>() - 0.5);
            let u_old = self.log_t[j];
            let u_new = u_old + step;
            let c = self.mult[j];
            out.total.proposed += 1;
            // beyond the ceiling e^{-T} underflows to zero and the prior rules the move out
            if u_new <= LOG_T_CEILING {
                let log_prior = self.rho * step - (u_new.exp() - u_old.exp());
                let log_ratio = self.log_lik_diff(j, u_new, c, &mut proposal)? + log_prior;
                out.total.log_ratio = log_ratio;
                if self.settle(j, (u_new, c), log_ratio, &mut proposal, rng)? {
                    out.total.accepted += 1;
                    out.per_coordinate[j] = true;
                }
            }
            if let Some(r) = out.refresh.as_mut() {
                let u_old = self.log_t[j];
                let rest = log_sum_rest(self.log_t, j);
                let u_new = if rest == f64::NEG_INFINITY || rng.random::<f64>() < REFRESH_PRIOR_WEIGHT {
                    sample_log_gamma(self.rho, rng)
                } else {
                    // logit of a Uniform(0, 1) draw, kept off the endpoints
                    let v: f64 = rng.random::<f64>().clamp(1e-300, 1.0 - 1e-16);
                    rest + v.ln() - (-v).ln_1p()
                };
                let u_new = u_new.min(LOG_T_CEILING);
                let c_new = if self.flip_signs && rng.random::<bool>() {
                    -self.mult[j]
                } else {
                    self.mult[j]
                };
                let proposal_terms = (self.log_prior(u_new) - self.log_prior(u_old))
                    + (self.log_refresh_density(u_old, rest)
                        - self.log_refresh_density(u_new, rest));
                r.proposed += 1;
                let accepted = if self.scale.is_some() {
                    self.refresh_fit_preserving(j, (u_new, c_new), proposal_terms, &mut proposal, rng)?
                } else {
                    let log_ratio = self.log_lik_diff(j, u_new, c_new, &mut proposal)? + proposal_terms;
                    self.settle(j, (u_new, c_new), log_ratio, &mut proposal, rng)?
                };
                if accepted {
                    r.accepted += 1;
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn validate_chain_inputs(y: &[f64], f: &PredictionMatrix, min_cols: usize) -> Result<()> {
    f.check_response(y)?;
    if f.rows() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 observations, got {}",
            f.rows()
        )));
    }
    if f.cols() < min_cols {
        return Err(Error::InvalidArgument(format!(
            "need at least {min_cols} predictors, got {}",
            f.cols()
        )));
    }
    Ok(())
}

pub(crate) fn check_prior_dim(hyper: &DirichletHyper, f: &PredictionMatrix) -> Result<()> {
    if hyper.dim() != f.cols() {
        return Err(Error::DimensionMismatch(format!(
            "prior has M = {} but F has {} columns",
            hyper.dim(),
            f.cols()
        )));
    }
    Ok(())
}

pub(crate) fn chain_abort(iteration: usize, e: Error) -> Error {
    match e {
        Error::ChainAbort { .. } => e,
        other => Error::ChainAbort {
            iteration,
            reason: other.to_string(),
        },
    }
}

/// Run burn-in sweeps with adaptation and return the final step sizes (one, or one
/// per coordinate).
pub fn tune_beta<R: Rng + ?Sized>(
    initial_beta: f64,
    target: f64,
    y: &[f64],
    f: &PredictionMatrix,
    hyper: &CaHyper,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidArgument(format!("target {target} must lie in (0, 1)")));
    }
    if !(initial_beta > 0.0 && initial_beta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "initial beta must be positive, got {initial_beta}"
        )));
    }
    validate_chain_inputs(y, f, 2)?;
    check_prior_dim(&hyper.dirichlet, f)?;
    let mut state = CaChainState::initial(y, f)?;
    let mut tuner = WeightTuner::new(hyper.weight_update, f.cols(), initial_beta, target);
    for it in 0..hyper.burn_in {
        gibbs_update_phi(&mut state, y, hyper, rng);
        let out = mh_update_t(&mut state, y, f, hyper, &tuner.steps(), rng)
            .map_err(|e| chain_abort(it, e))?;
        tuner.record(&out);
    }
    Ok(tuner.steps())
}

/// Run the convex-aggregation chain: `n_iter` sweeps of (Gibbs `φ`, MH `T`), storing
/// `λ` and `φ` after burn-in. Deterministic in `seed`.
pub fn run_chain_ca(
    y: &[f64],
    f: &PredictionMatrix,
    hyper: &CaHyper,
    seed: u64,
) -> Result<PosteriorSamples> {
    hyper.validate()?;
    validate_chain_inputs(y, f, 2)?;
    check_prior_dim(&hyper.dirichlet, f)?;

    let mut rng = seeded(seed);
    let mut state = CaChainState::initial(y, f)?;
    let mut tuner =
        WeightTuner::new(hyper.weight_update, f.cols(), hyper.beta, hyper.target_acceptance);
    let mut burn = AcceptanceRates::default();
    let mut post = AcceptanceRates::default();
    let mut draws = Vec::with_capacity(hyper.n_iter - hyper.burn_in);

    for it in 0..hyper.n_iter {
        gibbs_update_phi(&mut state, y, hyper, &mut rng);
        let out = mh_update_t(&mut state, y, f, hyper, &tuner.steps(), &mut rng)
            .map_err(|e| chain_abort(it, e))?;
        if it < hyper.burn_in {
            burn.add_weights(&out);
            if hyper.adapt {
                tuner.record(&out);
            }
        } else {
            post.add_weights(&out);
            draws.push(Draw {
                coefficients: state.lambda.clone(),
                phi: state.phi,
                scale: None,
            });
        }
    }

    Ok(PosteriorSamples {
        kind: ChainKind::Convex,
        draws,
        acceptance: post,
        burn_in_acceptance: burn,
        step_sizes: StepSizes {
            weights: tuner.summary(),
            weight_steps: tuner.steps(),
            scale: None,
        },
        seed,
    })
}
