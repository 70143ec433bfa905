//! C ABI over `bayes_aggregate`.
//!
//! Every function returns a [`BaStatus`]. On failure a message is kept in
//! thread-local storage and can be read with [`ba_last_error_message`]. Chains are
//! returned as opaque [`BaPosterior`] handles owned by the caller and released with
//! [`ba_posterior_free`]. Matrices are passed row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bayes_aggregate::dirichlet::{estimate_concentration, sample_symmetric_dirichlet, DirichletHyper, SimplexWeights};
use bayes_aggregate::matrix::PredictionMatrix;
use bayes_aggregate::pipeline::{aggregate_matrix, Method};
use bayes_aggregate::rng::seeded;
use bayes_aggregate::sampler::ca::CaHyper;
use bayes_aggregate::sampler::la::LaHyper;
use bayes_aggregate::sampler::{ChainKind, PosteriorSamples};
use bayes_aggregate::Error;

/// Result codes. `BA_STATUS_OK` is zero; everything else is an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaStatus {
    Ok = 0,
    InvalidArgument = 1,
    Domain = 2,
    DimensionMismatch = 3,
    NonFinite = 4,
    NumericFailure = 5,
    ChainAbort = 6,
    InsufficientDraws = 7,
    Io = 8,
    Parse = 9,
    NullPointer = 10,
    Panic = 11,
}

impl From<&Error> for BaStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => BaStatus::InvalidArgument,
            Error::Domain(_) => BaStatus::Domain,
            Error::DimensionMismatch(_) => BaStatus::DimensionMismatch,
            Error::NonFinite(_) => BaStatus::NonFinite,
            Error::NumericFailure(_) => BaStatus::NumericFailure,
            Error::ChainAbort { .. } => BaStatus::ChainAbort,
            Error::InsufficientDraws { .. } => BaStatus::InsufficientDraws,
            Error::Io { .. } => BaStatus::Io,
            Error::Csv(_) | Error::Parse(_) => BaStatus::Parse,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), (BaStatus, String)>) -> BaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BaStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside bayes_aggregate".into());
            BaStatus::Panic
        }
    }
}

fn lift(e: Error) -> (BaStatus, String) {
    ((&e).into(), e.to_string())
}

fn null(what: &str) -> (BaStatus, String) {
    (BaStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failed call on this thread, or null if none failed. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ba_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Draw `λ ~ Diri(α/M^γ, …)` into `out[0..m]`.
///
/// # Safety
/// `out` must point to `m` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ba_sample_dirichlet(alpha: f64, gamma: f64, m: usize, seed: u64, out: *mut f64) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let hyper = DirichletHyper::new(alpha, gamma, m).map_err(lift)?;
        let lambda = sample_symmetric_dirichlet(&hyper, &mut seeded(seed));
        std::slice::from_raw_parts_mut(out, m).copy_from_slice(lambda.values());
        Ok(())
    })
}

/// Monte Carlo concentration probabilities of the Dirichlet prior.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BaConcentration {
    pub p_ball: f64,
    pub se_ball: f64,
    pub p_tail: f64,
    pub se_tail: f64,
}

/// Estimate ball and tail probabilities with `λ*` uniform on the first `s`
/// coordinates.
///
/// # Safety
/// `out` must point to a writable `BaConcentration`.
#[no_mangle]
pub unsafe extern "C" fn ba_estimate_concentration(
    m: usize,
    alpha: f64,
    gamma: f64,
    s: usize,
    eps: f64,
    draws: usize,
    seed: u64,
    out: *mut BaConcentration,
) -> BaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if s == 0 || s > m {
            return Err((BaStatus::InvalidArgument, format!("s = {s} must lie in 1..={m}")));
        }
        let hyper = DirichletHyper::new(alpha, gamma, m).map_err(lift)?;
        let mut star = vec![0.0; m];
        star[..s].iter_mut().for_each(|v| *v = 1.0 / s as f64);
        let star = SimplexWeights::new(star).map_err(lift)?;
        let est = estimate_concentration(&hyper, &star, s, eps, draws, &mut seeded(seed)).map_err(lift)?;
        *out = BaConcentration {
            p_ball: est.p_ball,
            se_ball: est.se_ball,
            p_tail: est.p_tail,
            se_tail: est.se_tail,
        };
        Ok(())
    })
}

/// Which aggregator to run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaMode {
    Convex = 0,
    Linear = 1,
}

/// Chain settings; other hyperparameters keep their defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BaChainConfig {
    pub mode: BaMode,
    pub n_iter: usize,
    pub burn_in: usize,
    pub alpha: f64,
    pub gamma: f64,
}

/// `α = 1, γ = 2`, 2000 iterations with 1000 burn-in.
#[no_mangle]
pub extern "C" fn ba_chain_config_default(mode: BaMode) -> BaChainConfig {
    BaChainConfig {
        mode,
        n_iter: 2000,
        burn_in: 1000,
        alpha: 1.0,
        gamma: 2.0,
    }
}

/// Posterior draws and point estimate of one chain.
pub struct BaPosterior {
    samples: PosteriorSamples,
    estimate: Vec<f64>,
}

fn method(cfg: &BaChainConfig, m: usize) -> Result<Method, Error> {
    let dirichlet = DirichletHyper::new(cfg.alpha, cfg.gamma, m)?;
    Ok(match cfg.mode {
        BaMode::Convex => Method::Ca(CaHyper {
            dirichlet,
            n_iter: cfg.n_iter,
            burn_in: cfg.burn_in,
            ..CaHyper::defaults(m)?
        }),
        BaMode::Linear => Method::La(LaHyper {
            dirichlet,
            n_iter: cfg.n_iter,
            burn_in: cfg.burn_in,
            ..LaHyper::defaults(m)?
        }),
    })
}

/// Run a chain on the `n × m` prediction matrix `f` (row-major) and response `y`.
/// On success `*out` receives a new handle.
///
/// # Safety
/// `y` must point to `n` doubles, `f` to `n·m` doubles, `config` and `out` must be
/// valid.
#[no_mangle]
pub unsafe extern "C" fn ba_run_chain(
    y: *const f64,
    f: *const f64,
    n: usize,
    m: usize,
    config: *const BaChainConfig,
    seed: u64,
    out: *mut *mut BaPosterior,
) -> BaStatus {
    guard(|| {
        if y.is_null() || f.is_null() || config.is_null() || out.is_null() {
            return Err(null("y, f, config or out"));
        }
        *out = ptr::null_mut();
        let y = std::slice::from_raw_parts(y, n);
        let f = PredictionMatrix::from_row_major(n, m, std::slice::from_raw_parts(f, n * m).to_vec()).map_err(lift)?;
        let method = method(&*config, m).map_err(lift)?;
        let agg = aggregate_matrix(&f, y, &method, seed).map_err(lift)?;
        *out = Box::into_raw(Box::new(BaPosterior {
            samples: agg.samples,
            estimate: agg.weights,
        }));
        Ok(())
    })
}

/// Release a handle. Null is accepted.
///
/// # Safety
/// `handle` must come from `ba_run_chain` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ba_posterior_free(handle: *mut BaPosterior) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of stored draws and coefficients per draw.
///
/// # Safety
/// `handle` must be valid; `draws` and `dim` may be null.
#[no_mangle]
pub unsafe extern "C" fn ba_posterior_shape(handle: *const BaPosterior, draws: *mut usize, dim: *mut usize) -> BaStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        if let Some(d) = draws.as_mut() {
            *d = h.samples.len();
        }
        if let Some(d) = dim.as_mut() {
            *d = h.samples.dim();
        }
        Ok(())
    })
}

/// Posterior mean of `λ` (convex) or posterior median of `θ` (linear), `len`
/// doubles.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ba_posterior_estimate(handle: *const BaPosterior, out: *mut f64, len: usize) -> BaStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if len != h.estimate.len() {
            return Err((
                BaStatus::DimensionMismatch,
                format!("buffer holds {len} values, estimate has {}", h.estimate.len()),
            ));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(&h.estimate);
        Ok(())
    })
}

/// Copy all draws row-major (`draws × dim`) into `out`.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ba_posterior_draws(handle: *const BaPosterior, out: *mut f64, len: usize) -> BaStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let need = h.samples.len() * h.samples.dim();
        if len != need {
            return Err((BaStatus::DimensionMismatch, format!("buffer holds {len} values, draws need {need}")));
        }
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (chunk, d) in dst.chunks_exact_mut(h.samples.dim()).zip(&h.samples.draws) {
            chunk.copy_from_slice(&d.coefficients);
        }
        Ok(())
    })
}

/// Post-burn-in acceptance rates. `scale` and `signs` are set to -1 for the convex
/// chain.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BaAcceptance {
    pub weights: f64,
    pub scale: f64,
    pub signs: f64,
}

/// # Safety
/// `handle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ba_posterior_acceptance(handle: *const BaPosterior, out: *mut BaAcceptance) -> BaStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let a = &h.samples.acceptance;
        *out = BaAcceptance {
            weights: a.weights.rate(),
            scale: a.scale.map_or(-1.0, |b| b.rate()),
            signs: a.signs.map_or(-1.0, |b| b.rate()),
        };
        Ok(())
    })
}

/// Mode the handle was produced with.
///
/// # Safety
/// `handle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ba_posterior_mode(handle: *const BaPosterior, out: *mut BaMode) -> BaStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = match h.samples.kind {
            ChainKind::Convex => BaMode::Convex,
            ChainKind::Linear => BaMode::Linear,
        };
        Ok(())
    })
}
