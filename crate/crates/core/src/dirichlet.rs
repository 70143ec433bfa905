//! Symmetric and double Dirichlet priors.
//!
//! For the aggregation prior the concentration is `ρ = α / M^γ`, which for large `M`
//! is far below the smallest shape a plain gamma sampler can return a non-zero value
//! for. All samplers here therefore work with `log T_j`, `T_j ~ Gamma(ρ, 1)`, using
//!
//! ```text
//! Gamma(ρ, 1) =ᵈ Gamma(ρ + 1, 1) · U^{1/ρ},   U ~ Uniform(0, 1]
//! ```
//!
//! and only exponentiate after subtracting the maximum.

use nalgebra::DMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Absolute tolerance on `∑ λ_j = 1` (and on `∑ |η_j| = 1`).
pub const SIMPLEX_TOL: f64 = 1e-10;

/// A point on the `(M−1)`-simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("simplex weights must be non-empty".into()));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "simplex weight {j} is {} (must be finite and >= 0)",
                values[j]
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidArgument(format!(
                "simplex weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self(values))
    }

    /// Normalize a nonnegative vector with positive sum.
    pub fn from_unnormalized(values: &[f64]) -> Result<Self> {
        let sum: f64 = values.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "cannot normalize weights with sum {sum}"
            )));
        }
        Self::new(values.iter().map(|v| v / sum).collect())
    }

    /// Normalize `exp(log_values)` without overflow or total underflow.
    pub fn from_log_weights(log_values: &[f64]) -> Result<Self> {
        Self::new(softmax(log_values)?)
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Self::new(vec![1.0 / dim as f64; dim])
    }

    pub fn point_mass(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "index {index} out of range for dimension {dim}"
            )));
        }
        let mut v = vec![0.0; dim];
        v[index] = 1.0;
        Self::new(v)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Number of strictly positive entries.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|v| **v > 0.0).count()
    }
}

/// Linear-aggregation coefficients `λ = A · η` with `A = ‖λ‖₁ > 0` and `‖η‖₁ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedCoefficients {
    scale: f64,
    direction: Vec<f64>,
}

impl SignedCoefficients {
    pub fn new(scale: f64, direction: Vec<f64>) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
        }
        if direction.is_empty() || direction.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("direction must be finite and non-empty".into()));
        }
        let l1: f64 = direction.iter().map(|v| v.abs()).sum();
        if (l1 - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidArgument(format!(
                "direction has l1 norm {l1}, expected 1"
            )));
        }
        Ok(Self { scale, direction })
    }

    /// Split a nonzero coefficient vector into its l1 norm and direction.
    pub fn from_coefficients(coefficients: &[f64]) -> Result<Self> {
        let scale: f64 = coefficients.iter().map(|v| v.abs()).sum();
        if !(scale > 0.0) {
            return Err(Error::InvalidArgument("coefficient vector is zero".into()));
        }
        Self::new(scale, coefficients.iter().map(|v| v / scale).collect())
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    /// `μ_j = |η_j|`, a point on the simplex.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.direction.iter().map(|v| v.abs()).collect()
    }

    /// `z_j = sign(η_j)`, with `+1` for zero entries.
    pub fn signs(&self) -> Vec<f64> {
        self.direction
            .iter()
            .map(|v| if *v < 0.0 { -1.0 } else { 1.0 })
            .collect()
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.direction.iter().map(|v| self.scale * v).collect()
    }
}

/// Hyperparameters of the symmetric prior `Diri(ρ, …, ρ)`, `ρ = α / M^γ`.
///
/// `γ ≥ 1` is the regime with sparsity guarantees; smaller nonnegative values are
/// accepted so sensitivity sweeps can include them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletHyper {
    alpha: f64,
    gamma: f64,
    dim: usize,
}

impl DirichletHyper {
    pub fn new(alpha: f64, gamma: f64, dim: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma must be >= 0, got {gamma}")));
        }
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension M must be positive".into()));
        }
        let hyper = Self { alpha, gamma, dim };
        let rho = hyper.rho();
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "concentration alpha / M^gamma = {rho} is not a positive finite number"
            )));
        }
        Ok(hyper)
    }

    /// Defaults used throughout the experiments: `α = 1`, `γ = 2`.
    pub fn default_for(dim: usize) -> Result<Self> {
        Self::new(1.0, 2.0, dim)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> f64 {
        self.alpha / (self.dim as f64).powf(self.gamma)
    }

    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(self.alpha, self.gamma, dim)
    }
}

/// Monte Carlo estimate of the ball and tail probabilities of the prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationEstimate {
    /// `P(‖λ − λ*‖₂ ≤ ε)`
    pub p_ball: f64,
    pub se_ball: f64,
    /// `P(λ ∉ F_{s,ε})`, i.e. `P(tail_mass(λ, s) > ε)`
    pub p_tail: f64,
    pub se_tail: f64,
    pub draws_used: usize,
}

/// Binomial plug-in standard error `√(p(1−p)/n)`.
pub fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// `log T` for `T ~ Gamma(shape, 1)`, exact for arbitrarily small `shape`.
pub fn sample_log_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    debug_assert!(shape > 0.0);
    if shape >= 1.0 {
        let g = Gamma::new(shape, 1.0).expect("shape validated");
        let x: f64 = g.sample(rng);
        if x > 0.0 {
            return x.ln();
        }
    }
    let boosted = Gamma::new(shape + 1.0, 1.0).expect("shape validated");
    let x: f64 = boosted.sample(rng);
    // 1 - [0, 1) lies in (0, 1]
    let u = 1.0 - rng.random::<f64>();
    x.ln() + u.ln() / shape
}

/// Max-shifted softmax.
pub fn softmax(log_values: &[f64]) -> Result<Vec<f64>> {
    let max = log_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::NonFinite("log weights have no finite maximum".into()));
    }
    let mut out: Vec<f64> = log_values.iter().map(|l| (l - max).exp()).collect();
    let sum: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= sum);
    Ok(out)
}

/// `log ∑ exp(l_j)`.
pub fn log_sum_exp(log_values: &[f64]) -> f64 {
    let max = log_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + log_values.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
}

/// Draw `(log T_1, …, log T_M)` with `T_j ~ Gamma(ρ, 1)` iid.
pub fn sample_log_gammas<R: Rng + ?Sized>(hyper: &DirichletHyper, rng: &mut R) -> Vec<f64> {
    let rho = hyper.rho();
    (0..hyper.dim()).map(|_| sample_log_gamma(rho, rng)).collect()
}

/// One draw from `Diri(ρ, …, ρ)`.
pub fn sample_symmetric_dirichlet<R: Rng + ?Sized>(
    hyper: &DirichletHyper,
    rng: &mut R,
) -> SimplexWeights {
    let log_t = sample_log_gammas(hyper, rng);
    SimplexWeights::from_log_weights(&log_t).expect("log gamma draws are finite")
}

/// Log density of `Diri(ρ, …, ρ)` at an interior point of the simplex:
/// `log Γ(Mρ) − M log Γ(ρ) + (ρ−1) ∑ log λ_j`.
pub fn log_density_dirichlet(lambda: &SimplexWeights, hyper: &DirichletHyper) -> Result<f64> {
    if lambda.dim() != hyper.dim() {
        return Err(Error::DimensionMismatch(format!(
            "weights have dimension {} but prior has M = {}",
            lambda.dim(),
            hyper.dim()
        )));
    }
    if let Some(j) = lambda.values().iter().position(|v| *v <= 0.0) {
        return Err(Error::Domain(format!(
            "weight {j} is zero; the Dirichlet density is defined on the open simplex"
        )));
    }
    let rho = hyper.rho();
    let m = hyper.dim() as f64;
    // Sum in sorted order so that permuted inputs give bit-identical results.
    let mut logs: Vec<f64> = lambda.values().iter().map(|v| v.ln()).collect();
    logs.sort_by(f64::total_cmp);
    let sum_log: f64 = logs.iter().sum();
    Ok(ln_gamma(m * rho) - m * ln_gamma(rho) + (rho - 1.0) * sum_log)
}

/// One draw `η ~ DD(ρ, …, ρ)`: `|η|` is `Diri(ρ, …, ρ)` and the signs are fair coins.
pub fn sample_double_dirichlet<R: Rng + ?Sized>(hyper: &DirichletHyper, rng: &mut R) -> Vec<f64> {
    let magnitudes = sample_symmetric_dirichlet(hyper, rng).into_inner();
    magnitudes
        .into_iter()
        .map(|m| if rng.random::<bool>() { m } else { -m })
        .collect()
}

/// Sum of all but the `s` largest weights. `λ ∈ F_{s,ε}` iff this is `≤ ε`.
pub fn tail_mass(lambda: &SimplexWeights, s: usize) -> Result<f64> {
    let m = lambda.dim();
    if s == 0 || s > m {
        return Err(Error::InvalidArgument(format!("s = {s} must lie in 1..={m}")));
    }
    let mut sorted: Vec<(usize, f64)> = lambda.values().iter().copied().enumerate().collect();
    // descending by weight, ties by index
    sorted.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(sorted[s..].iter().rev().map(|(_, v)| v).sum())
}

/// Monte Carlo estimate of `P(‖λ−λ*‖₂ ≤ ε)` and `P(λ ∉ F_{s,ε})` under `Diri(ρ,…,ρ)`.
pub fn estimate_concentration<R: Rng + ?Sized>(
    hyper: &DirichletHyper,
    lambda_star: &SimplexWeights,
    s: usize,
    eps: f64,
    n_draws: usize,
    rng: &mut R,
) -> Result<ConcentrationEstimate> {
    let m = hyper.dim();
    if lambda_star.dim() != m {
        return Err(Error::DimensionMismatch(format!(
            "lambda* has dimension {} but prior has M = {m}",
            lambda_star.dim()
        )));
    }
    if s == 0 || s > m {
        return Err(Error::InvalidArgument(format!("s = {s} must lie in 1..={m}")));
    }
    if lambda_star.support_size() > s {
        return Err(Error::InvalidArgument(format!(
            "lambda* has {} nonzero entries, more than s = {s}",
            lambda_star.support_size()
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must lie in (0, 1)")));
    }
    if n_draws < 1000 {
        return Err(Error::InvalidArgument(format!(
            "n_draws = {n_draws} is below the minimum of 1000"
        )));
    }

    let mut in_ball = 0usize;
    let mut outside = 0usize;
    for _ in 0..n_draws {
        let lambda = sample_symmetric_dirichlet(hyper, rng);
        let dist2: f64 = lambda
            .values()
            .iter()
            .zip(lambda_star.values())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        if dist2.sqrt() <= eps {
            in_ball += 1;
        }
        if tail_mass(&lambda, s)? > eps {
            outside += 1;
        }
    }
    let p_ball = in_ball as f64 / n_draws as f64;
    let p_tail = outside as f64 / n_draws as f64;
    Ok(ConcentrationEstimate {
        p_ball,
        se_ball: binomial_se(p_ball, n_draws),
        p_tail,
        se_tail: binomial_se(p_tail, n_draws),
        draws_used: n_draws,
    })
}

/// Number of multinomial trials used when the caller has no preference.
pub const DEFAULT_SPARSE_TRIALS: usize = 64;

/// Result of [`sparse_approximation`].
#[derive(Debug, Clone, PartialEq)]
pub struct SparseApproximation {
    pub weights: SimplexWeights,
    /// `d_Σ(λ̄, λ*)`
    pub error: f64,
    /// `√(2κ/m)`
    pub bound: f64,
    /// Whether the truncation fallback produced the result.
    pub fallback: bool,
}

/// `d_Σ(a, b) = √((a−b)ᵀ Σ (a−b))`.
pub fn gram_distance(a: &[f64], b: &[f64], gram: &DMatrix<f64>) -> f64 {
    let diff = nalgebra::DVector::from_iterator(a.len(), a.iter().zip(b).map(|(x, y)| x - y));
    let q = diff.dot(&(gram * &diff));
    q.max(0.0).sqrt()
}

/// An `m`-sparse point `λ̄` on the simplex with `d_Σ(λ̄, λ*) ≤ √(2κ/m)`,
/// `κ = max_j Σ_jj`, built from multinomial empirical frequencies.
pub fn sparse_approximation<R: Rng + ?Sized>(
    lambda_star: &SimplexWeights,
    m: usize,
    gram: &DMatrix<f64>,
    n_trials: usize,
    rng: &mut R,
) -> Result<SparseApproximation> {
    let dim = lambda_star.dim();
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    if n_trials == 0 {
        return Err(Error::InvalidArgument("n_trials must be at least 1".into()));
    }
    if gram.nrows() != dim || gram.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "gram matrix is {}x{}, expected {dim}x{dim}",
            gram.nrows(),
            gram.ncols()
        )));
    }
    let kappa = gram.diagonal().iter().copied().fold(0.0_f64, f64::max);
    let scale = kappa.max(1.0);
    for i in 0..dim {
        for j in 0..i {
            if (gram[(i, j)] - gram[(j, i)]).abs() > 1e-9 * scale {
                return Err(Error::InvalidArgument("gram matrix is not symmetric".into()));
            }
        }
    }
    let eig = nalgebra::SymmetricEigen::new(gram.clone());
    if eig.eigenvalues.iter().any(|ev| *ev < -1e-9 * scale) {
        return Err(Error::InvalidArgument(
            "gram matrix is not positive semidefinite".into(),
        ));
    }

    let bound = (2.0 * kappa / m as f64).sqrt();
    let index = WeightedIndex::new(lambda_star.values())
        .map_err(|e| Error::InvalidArgument(format!("lambda*: {e}")))?;

    let mut best: Option<(Vec<f64>, f64)> = None;
    for _ in 0..n_trials {
        let mut counts = vec![0usize; dim];
        for _ in 0..m {
            counts[index.sample(rng)] += 1;
        }
        let v: Vec<f64> = counts.iter().map(|c| *c as f64 / m as f64).collect();
        let err = gram_distance(&v, lambda_star.values(), gram);
        if best.as_ref().is_none_or(|(_, e)| err < *e) {
            best = Some((v, err));
        }
        if err == 0.0 {
            break;
        }
    }
    let (v, err) = best.expect("at least one trial");
    if err <= bound {
        return Ok(SparseApproximation {
            weights: SimplexWeights::from_unnormalized(&v)?,
            error: err,
            bound,
            fallback: false,
        });
    }

    // Keep the m largest entries and renormalize.
    let mut order: Vec<usize> = (0..dim).collect();
    let vals = lambda_star.values();
    order.sort_by(|a, b| vals[*b].total_cmp(&vals[*a]).then(a.cmp(b)));
    let mut truncated = vec![0.0; dim];
    for &j in order.iter().take(m) {
        truncated[j] = vals[j];
    }
    let truncated = SimplexWeights::from_unnormalized(&truncated)?;
    let err = gram_distance(truncated.values(), vals, gram);
    if err <= bound {
        return Ok(SparseApproximation {
            weights: truncated,
            error: err,
            bound,
            fallback: true,
        });
    }
    Err(Error::NumericFailure(format!(
        "no {m}-sparse approximation within {bound} after {n_trials} trials and truncation \
         (best error {err})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn hyper_rho() {
        let h = DirichletHyper::new(1.0, 2.0, 100).unwrap();
        assert!((h.rho() - 1e-4).abs() < 1e-18);
        assert!(h.rho() < h.alpha() / 100.0);
        assert!(DirichletHyper::new(0.0, 2.0, 3).is_err());
        assert!(DirichletHyper::new(1.0, -1.0, 3).is_err());
        assert!(DirichletHyper::new(1.0, 2.0, 0).is_err());
    }

    #[test]
    fn simplex_validation() {
        assert!(SimplexWeights::new(vec![0.5, 0.5]).is_ok());
        assert!(SimplexWeights::new(vec![0.5, 0.6]).is_err());
        assert!(SimplexWeights::new(vec![1.5, -0.5]).is_err());
        assert!(SimplexWeights::new(vec![]).is_err());
    }

    #[test]
    fn signed_coefficients_reconstruct() {
        let sc = SignedCoefficients::from_coefficients(&[-0.5, 1.0, 0.0, 2.5]).unwrap();
        assert_eq!(sc.scale(), 4.0);
        assert_eq!(sc.coefficients(), vec![-0.5, 1.0, 0.0, 2.5]);
        assert_eq!(sc.signs(), vec![-1.0, 1.0, 1.0, 1.0]);
        assert!(SignedCoefficients::new(0.0, vec![1.0]).is_err());
        assert!(SignedCoefficients::new(1.0, vec![0.5, 0.4]).is_err());
    }

    #[test]
    fn log_density_uniform_cases() {
        let h = DirichletHyper::new(2.0, 1.0, 2).unwrap(); // rho = 1
        let lam = SimplexWeights::new(vec![0.3, 0.7]).unwrap();
        assert!(log_density_dirichlet(&lam, &h).unwrap().abs() < 1e-14);

        let h3 = DirichletHyper::new(3.0, 1.0, 3).unwrap(); // rho = 1
        let lam = SimplexWeights::new(vec![0.2, 0.5, 0.3]).unwrap();
        let v = log_density_dirichlet(&lam, &h3).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn log_density_rejects_boundary() {
        let h = DirichletHyper::new(1.0, 1.0, 2).unwrap();
        let lam = SimplexWeights::point_mass(2, 0).unwrap();
        assert!(matches!(log_density_dirichlet(&lam, &h), Err(Error::Domain(_))));
    }

    #[test]
    fn tail_mass_cases() {
        let e1 = SimplexWeights::point_mass(5, 0).unwrap();
        assert_eq!(tail_mass(&e1, 1).unwrap(), 0.0);
        let u = SimplexWeights::uniform(4).unwrap();
        assert_eq!(tail_mass(&u, 2).unwrap(), 0.5);
        assert_eq!(tail_mass(&u, 4).unwrap(), 0.0);
        assert!(tail_mass(&u, 0).is_err());
        assert!(tail_mass(&u, 5).is_err());
    }

    #[test]
    fn tiny_shape_does_not_underflow() {
        let mut rng = seeded(1);
        let h = DirichletHyper::new(1.0, 4.0, 1000).unwrap(); // rho = 1e-12
        for _ in 0..100 {
            let lt = sample_log_gammas(&h, &mut rng);
            assert!(lt.iter().all(|v| v.is_finite()));
            let w = SimplexWeights::from_log_weights(&lt).unwrap();
            let s: f64 = w.values().iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn log_gamma_moments_large_shape() {
        let mut rng = seeded(2);
        let n = 20_000;
        let mean: f64 =
            (0..n).map(|_| sample_log_gamma(3.0, &mut rng).exp()).sum::<f64>() / n as f64;
        // Var = 3 -> se = sqrt(3 / n) ~ 0.012
        assert!((mean - 3.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn log_gamma_moments_small_shape() {
        let mut rng = seeded(3);
        let n = 40_000;
        let shape = 0.3;
        let mean: f64 =
            (0..n).map(|_| sample_log_gamma(shape, &mut rng).exp()).sum::<f64>() / n as f64;
        let se = (shape / n as f64).sqrt();
        assert!((mean - shape).abs() < 4.0 * se, "mean {mean}");
    }

    #[test]
    fn concentration_full_sparsity_has_zero_tail() {
        let mut rng = seeded(4);
        let h = DirichletHyper::new(1.0, 2.0, 6).unwrap();
        let star = SimplexWeights::point_mass(6, 0).unwrap();
        let est = estimate_concentration(&h, &star, 6, 0.1, 2000, &mut rng).unwrap();
        assert_eq!(est.p_tail, 0.0);
        assert_eq!(est.se_tail, 0.0);
        assert_eq!(est.draws_used, 2000);
        let se = binomial_se(est.p_ball, 2000);
        assert_eq!(est.se_ball, se);
    }

    #[test]
    fn concentration_rejects_dense_center() {
        let mut rng = seeded(5);
        let h = DirichletHyper::new(1.0, 2.0, 4).unwrap();
        let star = SimplexWeights::uniform(4).unwrap();
        assert!(estimate_concentration(&h, &star, 2, 0.1, 1000, &mut rng).is_err());
        let e = SimplexWeights::point_mass(4, 1).unwrap();
        assert!(estimate_concentration(&h, &e, 1, 0.1, 10, &mut rng).is_err());
        assert!(estimate_concentration(&h, &e, 1, 1.5, 1000, &mut rng).is_err());
    }

    #[test]
    fn sparse_approximation_of_sparse_point_is_exact() {
        let mut rng = seeded(6);
        let gram = DMatrix::<f64>::identity(7, 7);
        let e1 = SimplexWeights::point_mass(7, 0).unwrap();
        for m in [1, 3, 10] {
            let out = sparse_approximation(&e1, m, &gram, 64, &mut rng).unwrap();
            assert_eq!(out.weights, e1);
            assert_eq!(out.error, 0.0);
        }
    }

    #[test]
    fn sparse_approximation_respects_bound() {
        let mut rng = seeded(7);
        let gram = DMatrix::<f64>::identity(10, 10);
        let u = SimplexWeights::uniform(10).unwrap();
        let out = sparse_approximation(&u, 5, &gram, DEFAULT_SPARSE_TRIALS, &mut rng).unwrap();
        assert!((out.bound - (2.0f64 / 5.0).sqrt()).abs() < 1e-15);
        assert!(out.error <= out.bound);
        assert!(out.weights.support_size() <= 5);
    }

    #[test]
    fn sparse_approximation_exact_multiples() {
        let mut rng = seeded(8);
        let gram = DMatrix::<f64>::identity(4, 4);
        let star = SimplexWeights::new(vec![0.25, 0.5, 0.25, 0.0]).unwrap();
        let out = sparse_approximation(&star, 4, &gram, 4096, &mut rng).unwrap();
        assert_eq!(out.error, 0.0);
        assert_eq!(out.weights, star);
    }

    #[test]
    fn sparse_approximation_input_validation() {
        let mut rng = seeded(9);
        let u = SimplexWeights::uniform(3).unwrap();
        let mut asym = DMatrix::<f64>::identity(3, 3);
        asym[(0, 1)] = 0.5;
        assert!(sparse_approximation(&u, 2, &asym, 4, &mut rng).is_err());
        let mut indef = DMatrix::<f64>::identity(3, 3);
        indef[(0, 0)] = -1.0;
        assert!(sparse_approximation(&u, 2, &indef, 4, &mut rng).is_err());
        let id = DMatrix::<f64>::identity(2, 2);
        assert!(sparse_approximation(&u, 2, &id, 4, &mut rng).is_err());
        let id3 = DMatrix::<f64>::identity(3, 3);
        assert!(sparse_approximation(&u, 0, &id3, 4, &mut rng).is_err());
        assert!(sparse_approximation(&u, 2, &id3, 0, &mut rng).is_err());
    }
}
