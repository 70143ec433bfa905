//! Seeded generators for the synthetic benchmark models.
//!
//! | model    | response                                        | noise          |
//! |----------|-------------------------------------------------|----------------|
//! | `S`      | `−0.5x₁ + x₂ + 0.4x₃ − x₄ + 0.6x₅`                | sd 0.5         |
//! | `NS1`    | `∑_j 3(−1)^j / j² · x_j`                        | sd 0.1         |
//! | `NS2`    | `∑_{j ≤ ⌊M/2⌋} 5/⌊M/2⌋ · x_j`                   | sd 0.1         |
//! | `NONLIN` | `x₁ + x₂ + 3x₃² − 2e^{−x₄}`                     | variance 0.5   |
//!
//! Covariates are iid standard normal. Training and test rows come from two
//! independent streams derived from the spec's seed.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pipeline::Dataset;
use crate::rng::{derive_seed, seeded};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimModel {
    /// Sparse linear model with five active covariates.
    S,
    /// Non-sparse, l1-summable alternating coefficients.
    Ns1,
    /// Half of the coefficients equal and nonzero.
    Ns2,
    /// Additive nonlinear model with four active covariates.
    Nonlin,
}

impl SimModel {
    pub fn default_noise_sd(self) -> f64 {
        match self {
            SimModel::S => 0.5,
            SimModel::Ns1 | SimModel::Ns2 => 0.1,
            SimModel::Nonlin => 0.5f64.sqrt(),
        }
    }

    pub fn is_linear(self) -> bool {
        !matches!(self, SimModel::Nonlin)
    }

    pub fn name(self) -> &'static str {
        match self {
            SimModel::S => "s",
            SimModel::Ns1 => "ns1",
            SimModel::Ns2 => "ns2",
            SimModel::Nonlin => "nonlin",
        }
    }
}

impl fmt::Display for SimModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SimModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s" => Ok(SimModel::S),
            "ns1" => Ok(SimModel::Ns1),
            "ns2" => Ok(SimModel::Ns2),
            "nonlin" | "sim1" => Ok(SimModel::Nonlin),
            other => Err(Error::Parse(format!("unknown model '{other}'"))),
        }
    }
}

/// Description of one synthetic data set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSpec {
    pub model: SimModel,
    /// `M` for the linear models, `d` for the nonlinear one.
    pub dim: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub noise_sd: f64,
    pub seed: u64,
    /// Generate responses without noise.
    pub noiseless: bool,
}

impl SimSpec {
    pub fn new(model: SimModel, dim: usize, n_train: usize, n_test: usize, seed: u64) -> Self {
        Self {
            model,
            dim,
            n_train,
            n_test,
            noise_sd: model.default_noise_sd(),
            seed,
            noiseless: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.n_train == 0 || self.n_test == 0 {
            return Err(Error::InvalidArgument(format!(
                "dimension and sample sizes must be positive (dim={}, n_train={}, n_test={})",
                self.dim, self.n_train, self.n_test
            )));
        }
        if !(self.noise_sd > 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "noise sd must be positive, got {}",
                self.noise_sd
            )));
        }
        Ok(())
    }
}

/// Ground truth of a generated data set.
#[derive(Debug, Clone, PartialEq)]
pub enum Truth {
    Linear(Vec<f64>),
    Nonlinear,
}

/// A generated train/test pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SimData {
    pub train: Dataset,
    pub test: Dataset,
    pub truth: Truth,
    /// Noise-free regression function on the test rows.
    pub test_mean: Vec<f64>,
}

impl SimData {
    pub fn coefficients(&self) -> Option<&[f64]> {
        match &self.truth {
            Truth::Linear(b) => Some(b),
            Truth::Nonlinear => None,
        }
    }
}

pub fn sparse_coefficients(m: usize) -> Result<Vec<f64>> {
    if m < 5 {
        return Err(Error::InvalidArgument(format!("model S needs M >= 5, got {m}")));
    }
    let mut beta = vec![0.0; m];
    beta[..5].copy_from_slice(&[-0.5, 1.0, 0.4, -1.0, 0.6]);
    Ok(beta)
}

/// `β_j = 3(−1)^j / j²`, `j = 1..M`.
pub fn ns1_coefficients(m: usize) -> Vec<f64> {
    (1..=m)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * 3.0 / (j as f64 * j as f64)
        })
        .collect()
}

/// `β_j = 5 / ⌊M/2⌋` for `j ≤ ⌊M/2⌋`, zero otherwise.
pub fn ns2_coefficients(m: usize) -> Result<Vec<f64>> {
    let half = m / 2;
    if half == 0 {
        return Err(Error::InvalidArgument(format!("model NS2 needs M >= 2, got {m}")));
    }
    let v = 5.0 / half as f64;
    Ok((0..m).map(|j| if j < half { v } else { 0.0 }).collect())
}

/// Regression function of the nonlinear model.
pub fn nonlinear_mean(x: &[f64]) -> f64 {
    x[0] + x[1] + 3.0 * x[2] * x[2] - 2.0 * (-x[3]).exp()
}

fn normal_rows<R: Rng>(rng: &mut R, n: usize, d: usize) -> Vec<f64> {
    (0..n * d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn draw_split(
    spec: &SimSpec,
    stream: u64,
    n: usize,
    mean: &dyn Fn(&[f64]) -> f64,
) -> Result<(Dataset, Vec<f64>)> {
    let mut rng = seeded(derive_seed(spec.seed, stream));
    let d = spec.dim;
    let x = normal_rows(&mut rng, n, d);
    let mut y = Vec::with_capacity(n);
    let mut mu = Vec::with_capacity(n);
    for row in x.chunks_exact(d) {
        let m = mean(row);
        let eps: f64 = if spec.noiseless {
            0.0
        } else {
            spec.noise_sd * rng.sample::<f64, _>(StandardNormal)
        };
        mu.push(m);
        y.push(m + eps);
    }
    Ok((Dataset::new(x, d, y)?, mu))
}

fn generate_linear(spec: &SimSpec, beta: Vec<f64>) -> Result<SimData> {
    let mean = |row: &[f64]| row.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>();
    let (train, _) = draw_split(spec, 1, spec.n_train, &mean)?;
    let (test, test_mean) = draw_split(spec, 2, spec.n_test, &mean)?;
    Ok(SimData {
        train,
        test,
        truth: Truth::Linear(beta),
        test_mean,
    })
}

/// Model (S).
pub fn gen_sparse_linear(spec: &SimSpec) -> Result<SimData> {
    spec.validate()?;
    generate_linear(spec, sparse_coefficients(spec.dim)?)
}

/// Model (NS1) or (NS2), chosen by `spec.model`.
pub fn gen_nonsparse(spec: &SimSpec) -> Result<SimData> {
    spec.validate()?;
    let beta = match spec.model {
        SimModel::Ns1 => ns1_coefficients(spec.dim),
        SimModel::Ns2 => ns2_coefficients(spec.dim)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "gen_nonsparse expects NS1 or NS2, got {other}"
            )))
        }
    };
    generate_linear(spec, beta)
}

/// The nonlinear model; `spec.dim` is the number of covariates `d ≥ 4`.
pub fn gen_nonlinear(spec: &SimSpec) -> Result<SimData> {
    spec.validate()?;
    if spec.dim < 4 {
        return Err(Error::InvalidArgument(format!(
            "nonlinear model needs d >= 4, got {}",
            spec.dim
        )));
    }
    let (train, _) = draw_split(spec, 1, spec.n_train, &nonlinear_mean)?;
    let (test, test_mean) = draw_split(spec, 2, spec.n_test, &nonlinear_mean)?;
    Ok(SimData {
        train,
        test,
        truth: Truth::Nonlinear,
        test_mean,
    })
}

pub fn generate(spec: &SimSpec) -> Result<SimData> {
    match spec.model {
        SimModel::S => gen_sparse_linear(spec),
        SimModel::Ns1 | SimModel::Ns2 => gen_nonsparse(spec),
        SimModel::Nonlin => gen_nonlinear(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_truth() {
        for m in [5, 20, 100] {
            let b = sparse_coefficients(m).unwrap();
            assert_eq!(b.iter().filter(|v| **v != 0.0).count(), 5);
        }
        assert!(sparse_coefficients(4).is_err());
    }

    #[test]
    fn sparse_noiseless_unit_row() {
        let b = sparse_coefficients(7).unwrap();
        let mut x = vec![0.0; 7];
        x[0] = 1.0;
        let y: f64 = x.iter().zip(&b).map(|(a, c)| a * c).sum();
        assert_eq!(y, -0.5);
    }

    #[test]
    fn ns1_values() {
        let b = ns1_coefficients(3);
        assert_eq!(b[0], -3.0);
        assert_eq!(b[1], 0.75);
        assert_eq!(b[2], -1.0 / 3.0);
        let l1: f64 = ns1_coefficients(500).iter().map(|v| v.abs()).sum();
        assert!((4.8..=4.935).contains(&l1), "{l1}");
    }

    #[test]
    fn ns2_values() {
        let b = ns2_coefficients(100).unwrap();
        assert_eq!(b.iter().filter(|v| **v == 0.1).count(), 50);
        assert_eq!(b.iter().filter(|v| **v == 0.0).count(), 50);
        assert!(ns2_coefficients(1).is_err());
    }

    #[test]
    fn nonlinear_origin() {
        assert_eq!(nonlinear_mean(&[0.0; 6]), -2.0);
    }

    #[test]
    fn deterministic_and_disjoint_streams() {
        let spec = SimSpec::new(SimModel::S, 10, 50, 50, 42);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.train.features(), a.test.features());
        let other = generate(&SimSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a.train, other.train);
    }

    #[test]
    fn noiseless_hook() {
        let spec = SimSpec {
            noiseless: true,
            ..SimSpec::new(SimModel::Nonlin, 6, 20, 20, 1)
        };
        let d = generate(&spec).unwrap();
        for i in 0..d.test.n() {
            assert_eq!(d.test.y()[i], d.test_mean[i]);
        }
        assert!(gen_nonlinear(&SimSpec::new(SimModel::Nonlin, 3, 5, 5, 0)).is_err());
    }

    #[test]
    fn parse_models() {
        assert_eq!("NS2".parse::<SimModel>().unwrap(), SimModel::Ns2);
        assert!("x".parse::<SimModel>().is_err());
    }
}
