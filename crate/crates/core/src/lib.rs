//! Bayesian convex (CA) and linear (LA) aggregation of regression predictors.
//!
//! The crate provides:
//!
//! * [`dirichlet`]: symmetric and double Dirichlet priors, sampled in log space so that
//!   tiny concentration parameters do not underflow, plus Monte Carlo estimators of
//!   their sparsity concentration.
//! * [`sampler`]: the block Metropolis-within-Gibbs samplers for the convex
//!   (Dirichlet aggregation) and linear (double-Dirichlet-Gamma) models.
//! * [`pipeline`]: split / fit / aggregate / refit, with a few built-in base learners.
//! * [`simgen`]: seeded generators for the synthetic benchmark models.
//! * [`bench`]: replicate orchestration, RMSE tables, gamma sweeps, contraction study
//!   and diagnostic export.

pub mod bench;
pub mod csvio;
pub mod dirichlet;
pub mod error;
pub mod learners;
pub mod matrix;
pub mod pipeline;
pub mod rng;
pub mod sampler;
pub mod simgen;

pub use error::{Error, Result};
