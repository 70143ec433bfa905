//! Linear aggregation sampler (double-Dirichlet-Gamma prior).
//!
//! Model: `Y_i = ∑_j θ_j F_ij + ε_i`, `θ_j = A z_j λ_j`, `λ_j = T_j / ∑_k T_k`,
//! `A ~ Gamma(c0, d0)`, `z_j` fair signs, `T_j ~ Gamma(ρ, 1)`, `φ ~ Gamma(a0, b0)`.
//! Sweep order: Gibbs `φ`, MH `T`, MH `A`, MH `z`. The likelihood is always
//! evaluated at the full coefficient vector `θ`.

use rand::Rng;

use super::ca::{
    chain_abort, check_prior_dim, initial_phi, log_prior_t, uniform_offsets,
    validate_chain_inputs, CoordinateSweep, ScaleCoupling, weights_from_log_t,
};
use super::{
    check_log_ratio, check_steps, mh_accept, phi_posterior_params, sample_gamma_rate,
    AcceptanceRates, BlockAcceptance, ChainKind, Draw, MhOutcome, PosteriorSamples, StepSizes,
    StepTuner, WeightOutcome, WeightTuner, WeightUpdate, DEFAULT_TARGET_ACCEPTANCE,
};
use crate::dirichlet::{sample_log_gamma, DirichletHyper, SignedCoefficients};
use crate::error::{Error, Result};
use crate::matrix::{sum_sq_resid, PredictionMatrix};
use crate::rng::seeded;

/// How the sign vector `z` is proposed and accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignUpdate {
    /// Flip every sign independently with probability 1/2, accept or reject jointly.
    Block,
    /// One flip proposal per coordinate, each accepted or rejected on its own.
    Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaHyper {
    pub dirichlet: DirichletHyper,
    /// Gamma prior on `φ` (shape, rate).
    pub a0: f64,
    pub b0: f64,
    /// Gamma prior on `A` (shape, rate).
    pub c0: f64,
    pub d0: f64,
    pub beta_t: f64,
    pub beta_a: f64,
    pub n_iter: usize,
    pub burn_in: usize,
    pub target_acceptance: f64,
    pub adapt: bool,
    pub sign_update: SignUpdate,
    pub weight_update: WeightUpdate,
    /// See [`super::ca::CaHyper::prior_refresh`].
    pub prior_refresh: bool,
    /// Drop the likelihood from every acceptance ratio (prior-only runs for testing).
    pub prior_only: bool,
}

impl LaHyper {
    /// `α = 1, γ = 2, a0 = b0 = c0 = d0 = 0.01`, 2000 iterations with 1000 burn-in.
    pub fn defaults(dim: usize) -> Result<Self> {
        Ok(Self {
            dirichlet: DirichletHyper::default_for(dim)?,
            a0: 0.01,
            b0: 0.01,
            c0: 0.01,
            d0: 0.01,
            beta_t: 10.0,
            beta_a: 1.0,
            n_iter: 2000,
            burn_in: 1000,
            target_acceptance: DEFAULT_TARGET_ACCEPTANCE,
            adapt: true,
            sign_update: SignUpdate::Coordinate,
            weight_update: WeightUpdate::Coordinate,
            prior_refresh: true,
            prior_only: false,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a0", self.a0),
            ("b0", self.b0),
            ("c0", self.c0),
            ("d0", self.d0),
            ("beta_t", self.beta_t),
            ("beta_a", self.beta_a),
        ] {
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

/// `κ` of [`LaChainState::ridge_start`] relative to the mean diagonal of `FᵀF`.
pub const RIDGE_START_PENALTY: f64 = 0.1;

/// Lower bound on the starting `log T_j` of [`LaChainState::ridge_start`].
pub const RIDGE_LOG_FLOOR: f64 = -30.0;

/// State of the linear chain with cached `λ`, `θ`, `Fθ` and residual sum of squares.
#[derive(Debug, Clone, PartialEq)]
pub struct LaChainState {
    log_t: Vec<f64>,
    signs: Vec<f64>,
    log_a: f64,
    phi: f64,
    lambda: Vec<f64>,
    theta: Vec<f64>,
    fitted: Vec<f64>,
    ssr: f64,
}

fn coefficients(log_a: f64, signs: &[f64], lambda: &[f64]) -> Vec<f64> {
    let a = log_a.exp();
    signs.iter().zip(lambda).map(|(z, l)| a * z * l).collect()
}

impl LaChainState {
    pub fn new(
        log_t: Vec<f64>,
        signs: Vec<f64>,
        log_a: f64,
        phi: f64,
        y: &[f64],
        f: &PredictionMatrix,
    ) -> Result<Self> {
        let m = f.cols();
        if log_t.len() != m || signs.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "state has {} weights and {} signs but F has {m} columns",
                log_t.len(),
                signs.len()
            )));
        }
        if signs.iter().any(|z| *z != 1.0 && *z != -1.0) {
            return Err(Error::InvalidArgument("signs must be +1 or -1".into()));
        }
        if !log_a.is_finite() {
            return Err(Error::InvalidArgument(format!("log A must be finite, got {log_a}")));
        }
        if !(phi > 0.0 && phi.is_finite()) {
            return Err(Error::InvalidArgument(format!("phi must be positive, got {phi}")));
        }
        f.check_response(y)?;
        let lambda = weights_from_log_t(&log_t)?;
        let theta = coefficients(log_a, &signs, &lambda);
        let fitted = f.mul_vec(&theta);
        let ssr = sum_sq_resid(y, &fitted);
        Ok(Self {
            log_t,
            signs,
            log_a,
            phi,
            lambda,
            theta,
            fitted,
            ssr,
        })
    }

    /// `log T = 0`, `z = +1`, `A = 1`, `φ = 1 / var(Y)`.
    pub fn initial(y: &[f64], f: &PredictionMatrix) -> Result<Self> {
        let m = f.cols();
        Self::new(vec![0.0; m], vec![1.0; m], 0.0, initial_phi(y), y, f)
    }

    /// Start at a ridge fit `(FᵀF + κI)⁻¹FᵀY` with `κ` a tenth of the mean diagonal
    /// of `FᵀF`: `z = sign(θ)`, `A = ‖θ‖₁`, `log T_j = log(|θ_j| / A)`
    /// (floored at `RIDGE_LOG_FLOOR`). Falls back to [`Self::initial`] when the fit
    /// is degenerate.
    pub fn ridge_start(y: &[f64], f: &PredictionMatrix) -> Result<Self> {
        f.check_response(y)?;
        let (n, m) = (f.rows(), f.cols());
        let fm = nalgebra::DMatrix::from_row_slice(n, m, f.as_slice());
        let mut gram = fm.transpose() * &fm;
        let kappa = (RIDGE_START_PENALTY * gram.trace() / m as f64).max(1e-12);
        for j in 0..m {
            gram[(j, j)] += kappa;
        }
        let rhs = fm.transpose() * nalgebra::DVector::from_column_slice(y);
        let theta = match gram.cholesky() {
            Some(c) => c.solve(&rhs),
            None => return Self::initial(y, f),
        };
        let a: f64 = theta.iter().map(|v| v.abs()).sum();
        if !(a > 0.0 && a.is_finite()) {
            return Self::initial(y, f);
        }
        let log_t = theta
            .iter()
            .map(|v| (v.abs() / a).ln().max(RIDGE_LOG_FLOOR))
            .collect();
        let signs = theta.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect();
        Self::new(log_t, signs, a.ln(), initial_phi(y), y, f)
    }

    pub fn log_t(&self) -> &[f64] {
        &self.log_t
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn log_a(&self) -> f64 {
        self.log_a
    }

    pub fn scale(&self) -> f64 {
        self.log_a.exp()
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn lambda_values(&self) -> &[f64] {
        &self.lambda
    }

    /// Cached `θ`.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// `θ` recomputed from `(log T, z, log A)`.
    pub fn reconstruct_theta(&self) -> Vec<f64> {
        let lambda = weights_from_log_t(&self.log_t).expect("state log T is bounded");
        coefficients(self.log_a, &self.signs, &lambda)
    }

    pub fn signed_coefficients(&self) -> SignedCoefficients {
        let direction = self
            .signs
            .iter()
            .zip(&self.lambda)
            .map(|(z, l)| z * l)
            .collect();
        SignedCoefficients::new(self.scale(), direction).expect("state direction has unit l1 norm")
    }

    pub fn ssr(&self) -> f64 {
        self.ssr
    }

    fn log_lik_diff(&self, ssr_new: f64, hyper: &LaHyper) -> f64 {
        if hyper.prior_only {
            0.0
        } else {
            -0.5 * self.phi * (ssr_new - self.ssr)
        }
    }
}

pub fn gibbs_update_phi<R: Rng + ?Sized>(
    state: &mut LaChainState,
    y: &[f64],
    hyper: &LaHyper,
    rng: &mut R,
) -> f64 {
    let (shape, rate) = phi_posterior_params(hyper.a0, hyper.b0, y.len(), state.ssr);
    state.phi = sample_gamma_rate(shape, rate, rng);
    state.phi
}

/// Random-walk update of `log T` (the direction magnitudes), joint or coordinate-wise
/// per `hyper.weight_update`; likelihood at `θ`.
pub fn mh_update_t<R: Rng + ?Sized>(
    state: &mut LaChainState,
    y: &[f64],
    f: &PredictionMatrix,
    hyper: &LaHyper,
    steps: &[f64],
    rng: &mut R,
) -> Result<WeightOutcome> {
    check_steps(steps, hyper.weight_update, f.cols())?;
    let rho = hyper.dirichlet.rho();
    if hyper.weight_update == WeightUpdate::Coordinate {
        let a = state.scale();
        let mut mult: Vec<f64> = state.signs.iter().map(|z| a * z).collect();
        let phi = (!hyper.prior_only).then_some(state.phi);
        let out = CoordinateSweep {
            log_t: &mut state.log_t,
            fitted: &mut state.fitted,
            ssr: &mut state.ssr,
            mult: &mut mult,
            flip_signs: true,
            phi,
            y,
            f,
            rho,
            scale: Some(ScaleCoupling {
                log_a: &mut state.log_a,
                c0: hyper.c0,
                d0: hyper.d0,
            }),
        }
        .run(steps, hyper.prior_refresh, rng)?;
        // sign bit, since A·z can underflow to ±0
        for (z, c) in state.signs.iter_mut().zip(&mult) {
            *z = if c.is_sign_negative() { -1.0 } else { 1.0 };
        }
        state.lambda = weights_from_log_t(&state.log_t)?;
        state.theta = coefficients(state.log_a, &state.signs, &state.lambda);
        state.fitted = f.mul_vec(&state.theta);
        state.ssr = sum_sq_resid(y, &state.fitted);
        return Ok(out);
    }
    let offsets = uniform_offsets(f.cols(), rng);
    let log_t: Vec<f64> = state
        .log_t
        .iter()
        .zip(&offsets)
        .map(|(u, o)| u + steps[0] * o)
        .collect();
    let lambda = weights_from_log_t(&log_t)?;
    let theta = coefficients(state.log_a, &state.signs, &lambda);
    let fitted = f.mul_vec(&theta);
    let ssr = sum_sq_resid(y, &fitted);
    let log_ratio = state.log_lik_diff(ssr, hyper)
        + (log_prior_t(&log_t, rho) - log_prior_t(&state.log_t, rho))
        + (log_t.iter().sum::<f64>() - state.log_t.iter().sum::<f64>());
    let log_ratio = check_log_ratio(log_ratio, "T")?;
    let accepted = mh_accept(log_ratio, rng);
    if accepted {
        state.log_t = log_t;
        state.lambda = lambda;
        state.theta = theta;
        state.fitted = fitted;
        state.ssr = ssr;
    }
    Ok(WeightOutcome {
        total: MhOutcome::single(accepted, log_ratio),
        per_coordinate: vec![accepted],
        refresh: None,
    })
}

/// Log acceptance ratio of `A^P = A^O e^{β U}` for a given `U`:
/// likelihood difference, `(c0−1) log A − d0 A` prior difference and `log A^P − log A^O`.
pub fn scale_log_ratio(
    state: &LaChainState,
    offset: f64,
    beta: f64,
    y: &[f64],
    hyper: &LaHyper,
) -> (f64, Vec<f64>, f64) {
    let step = beta * offset;
    let factor = step.exp();
    let fitted: Vec<f64> = state.fitted.iter().map(|v| v * factor).collect();
    let ssr = sum_sq_resid(y, &fitted);
    let log_a_new = state.log_a + step;
    let a_old = state.log_a.exp();
    let a_new = log_a_new.exp();
    let log_prior = ((hyper.c0 - 1.0) * log_a_new - hyper.d0 * a_new)
        - ((hyper.c0 - 1.0) * state.log_a - hyper.d0 * a_old);
    let log_jac = log_a_new - state.log_a;
    (state.log_lik_diff(ssr, hyper) + log_prior + log_jac, fitted, ssr)
}

/// Random-walk update of `log A`; `θ` rescales by the same factor.
pub fn mh_update_a<R: Rng + ?Sized>(
    state: &mut LaChainState,
    y: &[f64],
    hyper: &LaHyper,
    beta: f64,
    rng: &mut R,
) -> Result<MhOutcome> {
    let offset = rng.random::<f64>() - 0.5;
    let (log_ratio, fitted, ssr) = scale_log_ratio(state, offset, beta, y, hyper);
    let log_ratio = check_log_ratio(log_ratio, "A")?;
    let accepted = mh_accept(log_ratio, rng);
    if accepted {
        state.log_a += beta * offset;
        state.theta = coefficients(state.log_a, &state.signs, &state.lambda);
        state.fitted = fitted;
        state.ssr = ssr;
    }
    Ok(MhOutcome::single(accepted, log_ratio))
}

/// Independence proposal `log A ~ log Gamma(c0, d0)`, the prior of `log A`, so only
/// the likelihood ratio remains. With a small `c0` the posterior of `log A` can keep a
/// long left tail near `θ = 0`; local random-walk steps cannot cross it in a feasible
/// number of sweeps.
pub fn mh_refresh_a<R: Rng + ?Sized>(
    state: &mut LaChainState,
    y: &[f64],
    f: &PredictionMatrix,
    hyper: &LaHyper,
    rng: &mut R,
) -> Result<MhOutcome> {
    let log_a = sample_log_gamma(hyper.c0, rng) - hyper.d0.ln();
    // recomputed rather than rescaled: the factor between old and new can overflow
    let theta = coefficients(log_a, &state.signs, &state.lambda);
    let fitted = f.mul_vec(&theta);
    let ssr = sum_sq_resid(y, &fitted);
    let log_ratio = check_log_ratio(state.log_lik_diff(ssr, hyper), "A refresh")?;
    let accepted = mh_accept(log_ratio, rng);
    if accepted {
        state.log_a = log_a;
        state.theta = theta;
        state.fitted = fitted;
        state.ssr = ssr;
    }
    Ok(MhOutcome::single(accepted, log_ratio))
}

/// A proposed sign vector with its log acceptance ratio.
#[derive(Debug, Clone)]
pub struct SignProposal {
    pub log_ratio: f64,
    signs: Vec<f64>,
    theta: Vec<f64>,
    fitted: Vec<f64>,
    ssr: f64,
}

/// Multiply the signs by `flips` (entries ±1) and evaluate the likelihood ratio.
/// The prior on `z` is uniform and the proposal symmetric, so nothing else enters.
pub fn propose_signs(
    state: &LaChainState,
    flips: &[f64],
    y: &[f64],
    f: &PredictionMatrix,
    hyper: &LaHyper,
) -> SignProposal {
    let signs: Vec<f64> = state.signs.iter().zip(flips).map(|(z, v)| z * v).collect();
    let theta = coefficients(state.log_a, &signs, &state.lambda);
    let fitted = f.mul_vec(&theta);
    let ssr = sum_sq_resid(y, &fitted);
    SignProposal {
        log_ratio: state.log_lik_diff(ssr, hyper),
        signs,
        theta,
        fitted,
        ssr,
    }
}

impl LaChainState {
    fn accept_signs(&mut self, p: SignProposal) {
        self.signs = p.signs;
        self.theta = p.theta;
        self.fitted = p.fitted;
        self.ssr = p.ssr;
    }
}

fn random_flips<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    (0..m)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

/// Sign update. In [`SignUpdate::Block`] mode one joint proposal is made; in
/// [`SignUpdate::Coordinate`] mode each coordinate gets its own flip proposal.
pub fn mh_update_z<R: Rng + ?Sized>(
    state: &mut LaChainState,
    y: &[f64],
    f: &PredictionMatrix,
    hyper: &LaHyper,
    rng: &mut R,
) -> Result<MhOutcome> {
    match hyper.sign_update {
        SignUpdate::Block => {
            let flips = random_flips(f.cols(), rng);
            let proposal = propose_signs(state, &flips, y, f, hyper);
            let log_ratio = check_log_ratio(proposal.log_ratio, "z")?;
            let accepted = mh_accept(log_ratio, rng);
            if accepted {
                state.accept_signs(proposal);
            }
            Ok(MhOutcome::single(accepted, log_ratio))
        }
        SignUpdate::Coordinate => {
            let mut out = MhOutcome::single(false, 0.0);
            out.proposed = 0;
            for j in 0..f.cols() {
                // flipping z_j moves the fit by −2 θ_j F_{·j}
                let delta = -2.0 * state.theta[j];
                let fitted: Vec<f64> = state
                    .fitted
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v + delta * f.get(i, j))
                    .collect();
                let ssr = sum_sq_resid(y, &fitted);
                let log_ratio = check_log_ratio(state.log_lik_diff(ssr, hyper), "z")?;
                out.proposed += 1;
                out.log_ratio = log_ratio;
                if mh_accept(log_ratio, rng) {
                    out.accepted += 1;
                    state.signs[j] = -state.signs[j];
                    state.theta[j] = -state.theta[j];
                    state.fitted = fitted;
                    state.ssr = ssr;
                }
            }
            Ok(out)
        }
    }
}

/// Run the linear-aggregation chain and store `θ`, `φ` and `A` after burn-in.
/// `M = 1` is allowed (the direction is then fixed at `±1`).
pub fn run_chain_la(
    y: &[f64],
    f: &PredictionMatrix,
    hyper: &LaHyper,
    seed: u64,
) -> Result<PosteriorSamples> {
    hyper.validate()?;
    validate_chain_inputs(y, f, 1)?;
    check_prior_dim(&hyper.dirichlet, f)?;
    let state = LaChainState::ridge_start(y, f)?;
    run_chain_la_from(state, y, f, hyper, seed)
}

/// [`run_chain_la`] from an explicit starting state.
pub fn run_chain_la_from(
    mut state: LaChainState,
    y: &[f64],
    f: &PredictionMatrix,
    hyper: &LaHyper,
    seed: u64,
) -> Result<PosteriorSamples> {
    hyper.validate()?;
    validate_chain_inputs(y, f, 1)?;
    check_prior_dim(&hyper.dirichlet, f)?;

    let mut rng = seeded(seed);
    let mut tune_t =
        WeightTuner::new(hyper.weight_update, f.cols(), hyper.beta_t, hyper.target_acceptance);
    let mut tune_a = StepTuner::new(hyper.beta_a, hyper.target_acceptance);
    let mut burn = AcceptanceRates {
        scale: Some(BlockAcceptance::default()),
        signs: Some(BlockAcceptance::default()),
        ..Default::default()
    };
    let mut post = burn;
    let mut draws = Vec::with_capacity(hyper.n_iter - hyper.burn_in);

    for it in 0..hyper.n_iter {
        gibbs_update_phi(&mut state, y, hyper, &mut rng);
        let t = mh_update_t(&mut state, y, f, hyper, &tune_t.steps(), &mut rng)
            .map_err(|e| chain_abort(it, e))?;
        let a = mh_update_a(&mut state, y, hyper, tune_a.beta(), &mut rng)
            .map_err(|e| chain_abort(it, e))?;
        let a_refresh = if hyper.prior_refresh {
            Some(mh_refresh_a(&mut state, y, f, hyper, &mut rng).map_err(|e| chain_abort(it, e))?)
        } else {
            None
        };
        let z = mh_update_z(&mut state, y, f, hyper, &mut rng).map_err(|e| chain_abort(it, e))?;

        let book = if it < hyper.burn_in { &mut burn } else { &mut post };
        book.add_weights(&t);
        if let Some(b) = book.scale.as_mut() {
            b.add(&a);
        }
        if let Some(r) = &a_refresh {
            book.scale_refresh.get_or_insert_with(Default::default).add(r);
        }
        if let Some(b) = book.signs.as_mut() {
            b.add(&z);
        }
        if it < hyper.burn_in {
            if hyper.adapt {
                tune_t.record(&t);
                tune_a.record_counts(a.accepted, a.proposed);
            }
        } else {
            draws.push(Draw {
                coefficients: state.theta.clone(),
                phi: state.phi,
                scale: Some(state.scale()),
            });
        }
    }

    Ok(PosteriorSamples {
        kind: ChainKind::Linear,
        draws,
        acceptance: post,
        burn_in_acceptance: burn,
        step_sizes: StepSizes {
            weights: tune_t.summary(),
            weight_steps: tune_t.steps(),
            scale: Some(tune_a.beta()),
        },
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> (Vec<f64>, PredictionMatrix) {
        let f = PredictionMatrix::from_rows(&[
            vec![1.0, -1.0, 0.3],
            vec![2.0, 0.5, -0.2],
            vec![-0.5, 1.5, 1.0],
            vec![0.0, 2.0, -1.1],
            vec![1.3, 0.1, 0.4],
        ])
        .unwrap();
        (vec![0.9, 2.1, -0.4, 0.2, 1.0], f)
    }

    #[test]
    fn identity_proposals_accept() {
        let (y, f) = toy();
        let hyper = LaHyper::defaults(3).unwrap();
        let state =
            LaChainState::new(vec![0.1, -2.0, 0.4], vec![1.0, -1.0, 1.0], 0.3, 2.0, &y, &f)
                .unwrap();
        let (lr, _, _) = scale_log_ratio(&state, 0.0, 0.8, &y, &hyper);
        assert_eq!(lr, 0.0);
        let p = propose_signs(&state, &[1.0, 1.0, 1.0], &y, &f, &hyper);
        assert_eq!(p.log_ratio, 0.0);
    }

    #[test]
    fn parametrization_stays_consistent() {
        let (y, f) = toy();
        for mode in [SignUpdate::Block, SignUpdate::Coordinate] {
            let mut hyper = LaHyper::defaults(3).unwrap();
            hyper.sign_update = mode;
            let mut state = LaChainState::initial(&y, &f).unwrap();
            let mut rng = seeded(3);
            for _ in 0..300 {
                gibbs_update_phi(&mut state, &y, &hyper, &mut rng);
                mh_update_t(&mut state, &y, &f, &hyper, &[1.0], &mut rng).unwrap();
                mh_update_a(&mut state, &y, &hyper, 1.0, &mut rng).unwrap();
                mh_update_z(&mut state, &y, &f, &hyper, &mut rng).unwrap();
                let rebuilt = state.reconstruct_theta();
                for (a, b) in rebuilt.iter().zip(state.theta()) {
                    assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "{a} vs {b}");
                }
                let sc = state.signed_coefficients();
                for (a, b) in sc.coefficients().iter().zip(state.theta()) {
                    assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
                }
                let fitted = f.mul_vec(state.theta());
                assert!((sum_sq_resid(&y, &fitted) - state.ssr()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_bad_state() {
        let (y, f) = toy();
        assert!(LaChainState::new(vec![0.0; 3], vec![1.0, 0.0, 1.0], 0.0, 1.0, &y, &f).is_err());
        assert!(LaChainState::new(vec![0.0; 2], vec![1.0; 3], 0.0, 1.0, &y, &f).is_err());
        assert!(LaChainState::new(vec![0.0; 3], vec![1.0; 3], 0.0, -1.0, &y, &f).is_err());
    }

    #[test]
    fn bookkeeping() {
        let (y, f) = toy();
        let mut hyper = LaHyper::defaults(3).unwrap();
        hyper.n_iter = 400;
        hyper.burn_in = 150;
        let s = run_chain_la(&y, &f, &hyper, 9).unwrap();
        assert_eq!(s.len(), 250);
        let a = s.acceptance.scale.unwrap();
        assert_eq!(a.proposed, 250);
        assert_eq!(s.acceptance.weights.proposed, 750);
        assert_eq!(s.burn_in_acceptance.signs.unwrap().proposed, 450);
        assert_eq!(s.acceptance.refresh.unwrap().proposed, 750);
        assert!(s.draws.iter().all(|d| d.scale.unwrap() > 0.0));
    }
}
