//! Built-in base learners for self-contained pipeline runs.
//!
//! A [`Learner`] is a fit procedure; fitting yields a boxed [`Predictor`]. Fitting
//! is deterministic given the seed passed to [`Learner::fit`].

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::pipeline::Dataset;
use crate::rng::seeded;

/// A fitted regression function `x ↦ f(x)`.
pub trait Predictor: Send + Sync {
    fn predict(&self, x: &[f64]) -> f64;
}

pub trait Learner: Send + Sync {
    /// Identifier used in reports and error messages.
    fn id(&self) -> String;

    fn fit(&self, data: &Dataset, seed: u64) -> Result<Box<dyn Predictor>>;
}

/// Per-column mean and standard deviation, for standardizing features.
#[derive(Debug, Clone)]
struct Standardizer {
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl Standardizer {
    fn fit(data: &Dataset) -> Self {
        let (n, d) = (data.n() as f64, data.d());
        let mut mean = vec![0.0; d];
        for i in 0..data.n() {
            for (m, v) in mean.iter_mut().zip(data.row(i)) {
                *m += v / n;
            }
        }
        let mut var = vec![0.0; d];
        for i in 0..data.n() {
            for ((s, v), m) in var.iter_mut().zip(data.row(i)).zip(&mean) {
                *s += (v - m) * (v - m) / n;
            }
        }
        let scale = var
            .into_iter()
            .map(|v| if v > 1e-24 { v.sqrt() } else { 1.0 })
            .collect();
        Self { mean, scale }
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate() {
            *o = (x[k] - self.mean[k]) / self.scale[k];
        }
    }
}

/// Solve `(XᵀX + penalty·I) b = Xᵀy`; `unpenalized` leading columns get no penalty.
fn penalized_lstsq(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    penalty: f64,
    unpenalized: usize,
) -> Result<DVector<f64>> {
    let mut gram = x.transpose() * x;
    let p = gram.nrows();
    let jitter = 1e-10 * (gram.trace() / p as f64).max(1.0);
    for k in 0..p {
        gram[(k, k)] += if k < unpenalized { jitter } else { penalty + jitter };
    }
    let rhs = x.transpose() * y;
    gram.cholesky()
        .map(|c| c.solve(&rhs))
        .ok_or_else(|| Error::NumericFailure("normal equations are not positive definite".into()))
}

// ---------------------------------------------------------------------------
// ridge

/// Penalties tried by [`RidgeCv`], relative to the number of training rows.
pub const RIDGE_GRID: [f64; 7] = [1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0];

pub const RIDGE_FOLDS: usize = 5;

/// Ridge regression with an unpenalized intercept on standardized features. The
/// penalty is chosen from [`RIDGE_GRID`] by 5-fold cross-validation.
#[derive(Debug, Clone, Default)]
pub struct RidgeCv;

struct RidgeFit {
    std: Standardizer,
    coef: DVector<f64>,
}

impl Predictor for RidgeFit {
    fn predict(&self, x: &[f64]) -> f64 {
        let mut z = vec![0.0; x.len()];
        self.std.apply(x, &mut z);
        self.coef[0] + z.iter().zip(self.coef.iter().skip(1)).map(|(a, b)| a * b).sum::<f64>()
    }
}

fn ridge_design(data: &Dataset, std: &Standardizer) -> DMatrix<f64> {
    let d = data.d();
    let mut x = DMatrix::zeros(data.n(), d + 1);
    let mut z = vec![0.0; d];
    for i in 0..data.n() {
        std.apply(data.row(i), &mut z);
        x[(i, 0)] = 1.0;
        for (c, v) in z.iter().enumerate() {
            x[(i, c + 1)] = *v;
        }
    }
    x
}

impl Learner for RidgeCv {
    fn id(&self) -> String {
        "ridge".into()
    }

    fn fit(&self, data: &Dataset, seed: u64) -> Result<Box<dyn Predictor>> {
        let n = data.n();
        let std = Standardizer::fit(data);
        let all: Vec<usize> = (0..n).collect();
        let x = ridge_design(data, &std);
        let y = DVector::from_column_slice(data.y());

        let folds = RIDGE_FOLDS.min(n);
        let penalty = if folds < 2 {
            RIDGE_GRID[3] * n as f64
        } else {
            let mut order = all.clone();
            order.shuffle(&mut seeded(seed));
            let fold_of: Vec<usize> = {
                let mut f = vec![0; n];
                for (pos, &i) in order.iter().enumerate() {
                    f[i] = pos % folds;
                }
                f
            };
            let mut best = (f64::INFINITY, RIDGE_GRID[0]);
            for rel in RIDGE_GRID {
                let mut sse = 0.0;
                for k in 0..folds {
                    let train: Vec<usize> = all.iter().copied().filter(|&i| fold_of[i] != k).collect();
                    let held: Vec<usize> = all.iter().copied().filter(|&i| fold_of[i] == k).collect();
                    let xt = x.select_rows(&train);
                    let yt = DVector::from_iterator(train.len(), train.iter().map(|&i| data.y()[i]));
                    let b = penalized_lstsq(&xt, &yt, rel * train.len() as f64, 1)?;
                    for &i in &held {
                        let r = data.y()[i] - (x.row(i) * &b)[0];
                        sse += r * r;
                    }
                }
                if sse < best.0 {
                    best = (sse, rel);
                }
            }
            best.1 * n as f64
        };
        let coef = penalized_lstsq(&x, &y, penalty, 1)?;
        Ok(Box::new(RidgeFit { std, coef }))
    }
}

// ---------------------------------------------------------------------------
// k nearest neighbours

/// k-nearest-neighbour average on standardized features (Euclidean distance,
/// ties broken by training row index).
#[derive(Debug, Clone)]
pub struct Knn {
    pub k: usize,
}

struct KnnFit {
    k: usize,
    std: Standardizer,
    points: Vec<f64>,
    y: Vec<f64>,
    d: usize,
}

impl Predictor for KnnFit {
    fn predict(&self, x: &[f64]) -> f64 {
        let mut z = vec![0.0; self.d];
        self.std.apply(x, &mut z);
        let mut dist: Vec<(f64, usize)> = self
            .points
            .chunks_exact(self.d.max(1))
            .enumerate()
            .map(|(i, p)| (p.iter().zip(&z).map(|(a, b)| (a - b) * (a - b)).sum(), i))
            .collect();
        let k = self.k.min(dist.len());
        dist.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        dist[..k].iter().map(|(_, i)| self.y[*i]).sum::<f64>() / k as f64
    }
}

impl Learner for Knn {
    fn id(&self) -> String {
        format!("knn{}", self.k)
    }

    fn fit(&self, data: &Dataset, _seed: u64) -> Result<Box<dyn Predictor>> {
        if self.k == 0 {
            return Err(Error::InvalidArgument("knn needs k >= 1".into()));
        }
        let std = Standardizer::fit(data);
        let d = data.d();
        let mut points = vec![0.0; data.n() * d];
        for i in 0..data.n() {
            std.apply(data.row(i), &mut points[i * d..(i + 1) * d]);
        }
        Ok(Box::new(KnnFit {
            k: self.k,
            std,
            points,
            y: data.y().to_vec(),
            d,
        }))
    }
}

// ---------------------------------------------------------------------------
// additive cubic on a random feature subset

/// Additive cubic polynomial `c + Σ_{k∈S} (a_k x_k + b_k x_k² + c_k x_k³)` fitted by
/// least squares on a random subset `S` of `⌊min(√n, d/3)⌋` features (at least one).
/// The subset is drawn from the fitting seed combined with `index`.
#[derive(Debug, Clone)]
pub struct RandomSubsetCubic {
    pub index: usize,
}

pub fn subset_size(n: usize, d: usize) -> usize {
    let s = (n as f64).sqrt().min(d as f64 / 3.0).floor() as usize;
    s.clamp(1, d.max(1))
}

struct CubicFit {
    features: Vec<usize>,
    std: Standardizer,
    coef: DVector<f64>,
}

fn cubic_basis(z: &[f64], features: &[usize], out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    for &k in features {
        let v = z[k];
        out.extend([v, v * v, v * v * v]);
    }
}

impl Predictor for CubicFit {
    fn predict(&self, x: &[f64]) -> f64 {
        let mut z = vec![0.0; x.len()];
        self.std.apply(x, &mut z);
        let mut b = Vec::new();
        cubic_basis(&z, &self.features, &mut b);
        b.iter().zip(self.coef.iter()).map(|(a, c)| a * c).sum()
    }
}

impl RandomSubsetCubic {
    /// Features used when fitting `n` rows of dimension `d` with `seed`.
    pub fn features(&self, n: usize, d: usize, seed: u64) -> Vec<usize> {
        let mut rng = seeded(crate::rng::derive_seed(seed, self.index as u64));
        let mut f = sample(&mut rng, d, subset_size(n, d)).into_vec();
        f.sort_unstable();
        f
    }
}

impl Learner for RandomSubsetCubic {
    fn id(&self) -> String {
        format!("cubic{}", self.index)
    }

    fn fit(&self, data: &Dataset, seed: u64) -> Result<Box<dyn Predictor>> {
        let features = self.features(data.n(), data.d(), seed);
        let std = Standardizer::fit(data);
        let p = 1 + 3 * features.len();
        let mut z = vec![0.0; data.d()];
        let mut basis = Vec::with_capacity(p);
        let mut x = DMatrix::zeros(data.n(), p);
        for i in 0..data.n() {
            std.apply(data.row(i), &mut z);
            cubic_basis(&z, &features, &mut basis);
            for (c, v) in basis.iter().enumerate() {
                x[(i, c)] = *v;
            }
        }
        let coef = penalized_lstsq(&x, &DVector::from_column_slice(data.y()), 1e-6, 1)?;
        Ok(Box::new(CubicFit { features, std, coef }))
    }
}

// ---------------------------------------------------------------------------
// trivial learners

/// `f(x) = x_j`. With one per feature the linear aggregator is linear regression.
#[derive(Debug, Clone)]
pub struct CoordinateProjection {
    pub j: usize,
}

struct Projection(usize);

impl Predictor for Projection {
    fn predict(&self, x: &[f64]) -> f64 {
        x[self.0]
    }
}

impl Learner for CoordinateProjection {
    fn id(&self) -> String {
        format!("x{}", self.j + 1)
    }

    fn fit(&self, data: &Dataset, _seed: u64) -> Result<Box<dyn Predictor>> {
        if self.j >= data.d() {
            return Err(Error::InvalidArgument(format!(
                "projection onto feature {} of a {}-dimensional dataset",
                self.j + 1,
                data.d()
            )));
        }
        Ok(Box::new(Projection(self.j)))
    }
}

/// A fixed function, ignoring the data. Handy for tests and for wrapping
/// externally trained models.
pub struct FixedFunction<F> {
    pub name: String,
    pub f: F,
}

struct FixedFit<F>(F);

impl<F: Fn(&[f64]) -> f64 + Send + Sync> Predictor for FixedFit<F> {
    fn predict(&self, x: &[f64]) -> f64 {
        (self.0)(x)
    }
}

impl<F: Fn(&[f64]) -> f64 + Clone + Send + Sync + 'static> Learner for FixedFunction<F> {
    fn id(&self) -> String {
        self.name.clone()
    }

    fn fit(&self, _data: &Dataset, _seed: u64) -> Result<Box<dyn Predictor>> {
        Ok(Box::new(FixedFit(self.f.clone())))
    }
}

/// The default ensemble: ridge, kNN with k = 5 and 15, and `n_cubic` random-subset
/// cubic models.
pub fn default_learners(n_cubic: usize) -> Vec<Box<dyn Learner>> {
    let mut v: Vec<Box<dyn Learner>> = vec![
        Box::new(RidgeCv),
        Box::new(Knn { k: 5 }),
        Box::new(Knn { k: 15 }),
    ];
    v.extend((0..n_cubic).map(|index| Box::new(RandomSubsetCubic { index }) as Box<dyn Learner>));
    v
}

pub const DEFAULT_CUBIC_LEARNERS: usize = 6;

/// One projection learner per feature.
pub fn projection_learners(d: usize) -> Vec<Box<dyn Learner>> {
    (0..d)
        .map(|j| Box::new(CoordinateProjection { j }) as Box<dyn Learner>)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn linear_data(n: usize, seed: u64) -> Dataset {
        let mut rng = seeded(seed);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for _ in 0..n {
            let a: f64 = rng.random_range(-2.0..2.0);
            let b: f64 = rng.random_range(-2.0..2.0);
            x.extend([a, b]);
            y.push(1.0 + 2.0 * a - b);
        }
        Dataset::new(x, 2, y).unwrap()
    }

    #[test]
    fn ridge_recovers_noiseless_line() {
        let data = linear_data(60, 3);
        let p = RidgeCv.fit(&data, 1).unwrap();
        assert!((p.predict(&[0.5, 0.25]) - 1.75).abs() < 1e-2);
    }

    #[test]
    fn knn_one_interpolates() {
        let data = linear_data(30, 4);
        let p = Knn { k: 1 }.fit(&data, 0).unwrap();
        for i in 0..data.n() {
            assert_eq!(p.predict(data.row(i)), data.y()[i]);
        }
    }

    #[test]
    fn knn_k_equal_n_is_mean() {
        let data = linear_data(20, 5);
        let p = Knn { k: 20 }.fit(&data, 0).unwrap();
        let mean = data.y().iter().sum::<f64>() / 20.0;
        assert!((p.predict(&[9.0, 9.0]) - mean).abs() < 1e-12);
    }

    #[test]
    fn cubic_fits_cubic() {
        let mut rng = seeded(8);
        let d = 3;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for _ in 0..200 {
            let r: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            y.push(r.iter().map(|v| v * v * v - v).sum());
            x.extend(r);
        }
        let data = Dataset::new(x, d, y).unwrap();
        // d/3 = 1 feature: the fit explains that coordinate's share exactly
        let learner = RandomSubsetCubic { index: 0 };
        let feats = learner.features(200, d, 11);
        assert_eq!(feats.len(), 1);
        let p = learner.fit(&data, 11).unwrap();
        let mut probe = vec![0.0; d];
        probe[feats[0]] = 0.5;
        let expected = 0.125 - 0.5;
        assert!((p.predict(&probe) - expected).abs() < 0.05);
    }

    #[test]
    fn subset_sizes() {
        assert_eq!(subset_size(500, 20), 6);
        assert_eq!(subset_size(16, 100), 4);
        assert_eq!(subset_size(100, 2), 1);
    }

    #[test]
    fn projection_bounds() {
        let data = linear_data(5, 0);
        assert!(CoordinateProjection { j: 2 }.fit(&data, 0).is_err());
        let p = CoordinateProjection { j: 1 }.fit(&data, 0).unwrap();
        assert_eq!(p.predict(&[3.0, 4.0]), 4.0);
    }
}
