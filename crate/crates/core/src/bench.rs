//! Replicate orchestration, RMSE tables, γ sweeps, the contraction study and
//! diagnostic export.
//!
//! Replicate `r` of a benchmark with master seed `s` generates its data from seed
//! `s + r`, so every method and every γ value sees the same data for the same `r`.
//! Reports carry a SHA-256 hash of each replicate's data to make that checkable.
//! Replicates run in parallel on the current rayon pool.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::csvio::{create_dir, into_bytes, write_atomic};
use crate::dirichlet::{estimate_concentration, DirichletHyper, SimplexWeights};
use crate::error::{Error, Result};
use crate::learners::{default_learners, DEFAULT_CUBIC_LEARNERS};
use crate::pipeline::{aggregate, aggregate_matrix, Method, PipelineConfig, DEFAULT_TRAIN_FRAC};
use crate::rng::{derive_seed, seeded};
use crate::sampler::la::{run_chain_la, LaHyper};
use crate::sampler::{summarize_posterior, PosteriorSamples};
use crate::simgen::{generate, SimData, SimModel, SimSpec};

/// `{(1/N) Σ (ŷ_i − y_i)²}^{1/2}`.
pub fn rmse(predictions: &[f64], truth: &[f64]) -> Result<f64> {
    if predictions.len() != truth.len() || truth.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "rmse needs equal non-empty lengths, got {} and {}",
            predictions.len(),
            truth.len()
        )));
    }
    let ss: f64 = predictions.iter().zip(truth).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((ss / truth.len() as f64).sqrt())
}

/// SHA-256 over the little-endian bytes of the training and test data.
pub fn dataset_hash(data: &SimData) -> String {
    let mut h = Sha256::new();
    for part in [
        data.train.features(),
        data.train.y(),
        data.test.features(),
        data.test.y(),
    ] {
        for v in part {
            h.update(v.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

/// Sample mean and the `n − 1` standard deviation (absent for one value).
pub fn mean_sd(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = (n > 1).then(|| {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    });
    (mean, sd)
}

/// Least-squares line `y ≈ intercept + slope · x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "line fit needs at least 2 paired points, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::InvalidArgument("line fit needs at least two distinct x values".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Ok(LineFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

// ---------------------------------------------------------------------------
// replicates

/// What one method produced on one replicate of a linear model.
#[derive(Debug, Clone)]
pub struct LinearReplicate {
    pub rmse: f64,
    pub samples: PosteriorSamples,
    pub weights: Vec<f64>,
}

/// Aggregate the coordinate projections `f_j(x) = x_j` on the training rows and
/// score the point estimate on the test rows.
pub fn run_linear_replicate(data: &SimData, method: &Method, seed: u64) -> Result<LinearReplicate> {
    let f = data.train.design()?;
    let agg = aggregate_matrix(&f, data.train.y(), method, seed)?;
    let pred = agg.predict_matrix(&data.test.design()?)?;
    Ok(LinearReplicate {
        rmse: rmse(&pred, data.test.y())?,
        weights: agg.weights,
        samples: agg.samples,
    })
}

/// Ensemble and refit-learner RMSEs of one pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReplicate {
    pub ensemble: f64,
    pub learners: Vec<(String, f64)>,
    pub weights: Vec<f64>,
}

impl PipelineReplicate {
    pub fn best_learner(&self) -> f64 {
        self.learners.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min)
    }
}

/// Split / fit / aggregate / refit with the built-in learners, scored on the test rows.
pub fn run_pipeline_replicate(
    data: &SimData,
    method: &Method,
    n_cubic: usize,
    seed: u64,
) -> Result<PipelineReplicate> {
    let learners = default_learners(n_cubic);
    let config = PipelineConfig {
        method: *method,
        train_frac: DEFAULT_TRAIN_FRAC,
        seed,
    };
    let model = aggregate(&data.train, &learners, &config)?;
    let f_test = model.learner_predictions(&data.test)?;
    let ensemble = rmse(&model.aggregation.predict_matrix(&f_test)?, data.test.y())?;
    let learners = model
        .ids
        .iter()
        .enumerate()
        .map(|(j, id)| Ok((id.clone(), rmse(&f_test.column(j), data.test.y())?)))
        .collect::<Result<_>>()?;
    Ok(PipelineReplicate {
        ensemble,
        learners,
        weights: model.weights().to_vec(),
    })
}

// ---------------------------------------------------------------------------
// benchmark reports

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    /// Model and sizes; `spec.seed` is replaced by `master_seed + r` per replicate.
    pub spec: SimSpec,
    pub methods: Vec<Method>,
    pub replicates: usize,
    pub master_seed: u64,
    /// Cubic learners in the nonlinear pipeline.
    pub n_cubic: usize,
}

impl BenchmarkConfig {
    /// LA with default hyperparameters.
    pub fn new(spec: SimSpec, replicates: usize, master_seed: u64) -> Result<Self> {
        Ok(Self {
            methods: vec![Method::la_defaults(spec.dim)?],
            spec,
            replicates,
            master_seed,
            n_cubic: DEFAULT_CUBIC_LEARNERS,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidArgument("replicates must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument("no methods to benchmark".into()));
        }
        self.spec.validate()
    }

    pub fn replicate_seed(&self, r: usize) -> u64 {
        self.master_seed.wrapping_add(r as u64)
    }

    pub fn replicate_spec(&self, r: usize) -> SimSpec {
        SimSpec {
            seed: self.replicate_seed(r),
            ..self.spec
        }
    }
}

const CHAIN_STREAM: u64 = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateResult {
    pub replicate: usize,
    pub seed: u64,
    pub dataset_hash: String,
    /// `Err` holds the error message of a failed run.
    pub rmse: std::result::Result<f64, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodReport {
    pub method: String,
    pub results: Vec<ReplicateResult>,
    /// Over successful replicates.
    pub mean: f64,
    pub sd: Option<f64>,
    pub min: f64,
    pub max: f64,
    pub failures: usize,
}

impl MethodReport {
    pub fn from_results(method: String, results: Vec<ReplicateResult>) -> Self {
        let ok: Vec<f64> = results.iter().filter_map(|r| r.rmse.clone().ok()).collect();
        let failures = results.len() - ok.len();
        let (mean, sd) = if ok.is_empty() { (f64::NAN, None) } else { mean_sd(&ok) };
        Self {
            method,
            mean,
            sd,
            min: ok.iter().copied().fold(f64::INFINITY, f64::min),
            max: ok.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            failures,
            results,
        }
    }

    pub fn values(&self) -> Vec<Option<f64>> {
        self.results.iter().map(|r| r.rmse.clone().ok()).collect()
    }
}

/// Per-method RMSE summaries. `wall_seconds` is not written to CSV so output files
/// stay byte-identical across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseReport {
    pub methods: Vec<MethodReport>,
    pub wall_seconds: f64,
}

impl RmseReport {
    pub fn method(&self, name: &str) -> Option<&MethodReport> {
        self.methods.iter().find(|m| m.method == name)
    }

    /// Long format: `method,replicate,seed,dataset_hash,rmse,error`.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["method", "replicate", "seed", "dataset_hash", "rmse", "error"])?;
        for m in &self.methods {
            for r in &m.results {
                let (v, e) = match &r.rmse {
                    Ok(v) => (v.to_string(), String::new()),
                    Err(e) => (String::new(), e.clone()),
                };
                w.write_record([
                    m.method.clone(),
                    r.replicate.to_string(),
                    r.seed.to_string(),
                    r.dataset_hash.clone(),
                    v,
                    e,
                ])?;
            }
        }
        into_bytes(w)
    }

    /// Inverse of [`RmseReport::to_csv`]; `wall_seconds` comes back as 0.
    pub fn from_csv(bytes: &[u8]) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(bytes);
        let mut methods: Vec<(String, Vec<ReplicateResult>)> = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let num = |k: usize| -> Result<u64> {
                rec[k].parse().map_err(|_| Error::Parse(format!("bad integer '{}'", &rec[k])))
            };
            let rmse = if rec[4].is_empty() {
                Err(rec[5].to_string())
            } else {
                Ok(rec[4]
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad rmse '{}'", &rec[4])))?)
            };
            let result = ReplicateResult {
                replicate: num(1)? as usize,
                seed: num(2)?,
                dataset_hash: rec[3].to_string(),
                rmse,
            };
            match methods.iter_mut().find(|(m, _)| m == &rec[0]) {
                Some((_, v)) => v.push(result),
                None => methods.push((rec[0].to_string(), vec![result])),
            }
        }
        Ok(Self {
            methods: methods
                .into_iter()
                .map(|(m, r)| MethodReport::from_results(m, r))
                .collect(),
            wall_seconds: 0.0,
        })
    }

    /// `method,replicates,failures,mean,sd,min,max`; `sd` is empty for one replicate.
    pub fn summary_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["method", "replicates", "failures", "mean", "sd", "min", "max"])?;
        for m in &self.methods {
            w.write_record([
                m.method.clone(),
                m.results.len().to_string(),
                m.failures.to_string(),
                m.mean.to_string(),
                m.sd.map_or(String::new(), |s| s.to_string()),
                m.min.to_string(),
                m.max.to_string(),
            ])?;
        }
        into_bytes(w)
    }

    /// Write `rmse.csv` and `summary.csv` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        create_dir(dir)?;
        let a = dir.join("rmse.csv");
        let b = dir.join("summary.csv");
        write_atomic(&a, &self.to_csv()?)?;
        write_atomic(&b, &self.summary_csv()?)?;
        Ok(vec![a, b])
    }
}

/// Per-replicate output of every method, in method order.
struct ReplicateRow {
    hash: String,
    seed: u64,
    /// (method name, result)
    entries: Vec<(String, std::result::Result<f64, String>)>,
}

fn run_one_replicate(config: &BenchmarkConfig, r: usize) -> ReplicateRow {
    let spec = config.replicate_spec(r);
    let seed = spec.seed;
    let data = match generate(&spec) {
        Ok(d) => d,
        Err(e) => {
            return ReplicateRow {
                hash: String::new(),
                seed,
                entries: config
                    .methods
                    .iter()
                    .map(|m| (m.name().to_string(), Err(e.to_string())))
                    .collect(),
            }
        }
    };
    let hash = dataset_hash(&data);
    let mut entries = Vec::new();
    for (k, method) in config.methods.iter().enumerate() {
        let chain_seed = derive_seed(seed, CHAIN_STREAM + k as u64);
        if spec.model.is_linear() {
            let out = run_linear_replicate(&data, method, chain_seed);
            entries.push((method.name().to_string(), out.map(|o| o.rmse).map_err(|e| e.to_string())));
        } else {
            match run_pipeline_replicate(&data, method, config.n_cubic, chain_seed) {
                Ok(p) => {
                    entries.push((method.name().to_string(), Ok(p.ensemble)));
                    if k == 0 {
                        for (id, v) in p.learners {
                            entries.push((format!("learner:{id}"), Ok(v)));
                        }
                    }
                }
                Err(e) => entries.push((method.name().to_string(), Err(e.to_string()))),
            }
        }
    }
    ReplicateRow { hash, seed, entries }
}

/// Run every method on every replicate and summarize per method. Failed runs are
/// kept in the report and excluded from the summaries.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<RmseReport> {
    config.validate()?;
    let start = Instant::now();
    let rows: Vec<ReplicateRow> = (0..config.replicates)
        .into_par_iter()
        .map(|r| run_one_replicate(config, r))
        .collect();

    let mut methods: Vec<(String, Vec<ReplicateResult>)> = Vec::new();
    for (r, row) in rows.into_iter().enumerate() {
        for (name, value) in row.entries {
            let result = ReplicateResult {
                replicate: r,
                seed: row.seed,
                dataset_hash: row.hash.clone(),
                rmse: value,
            };
            match methods.iter_mut().find(|(m, _)| *m == name) {
                Some((_, v)) => v.push(result),
                None => methods.push((name, vec![result])),
            }
        }
    }
    Ok(RmseReport {
        methods: methods
            .into_iter()
            .map(|(m, r)| MethodReport::from_results(m, r))
            .collect(),
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

// ---------------------------------------------------------------------------
// γ sweep

fn with_gamma(method: &Method, gamma: f64) -> Result<Method> {
    Ok(match *method {
        Method::Ca(mut h) => {
            h.dirichlet = DirichletHyper::new(h.dirichlet.alpha(), gamma, h.dirichlet.dim())?;
            Method::Ca(h)
        }
        Method::La(mut h) => {
            h.dirichlet = DirichletHyper::new(h.dirichlet.alpha(), gamma, h.dirichlet.dim())?;
            Method::La(h)
        }
    })
}

/// One report per γ for the first method of `config`, all on the same data.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSweep {
    pub gammas: Vec<f64>,
    pub reports: Vec<MethodReport>,
}

/// Mean and standard error of per-replicate differences `a − b`, over replicates
/// where both succeeded.
pub fn paired_difference(a: &MethodReport, b: &MethodReport) -> Result<(f64, f64)> {
    let mut d = Vec::new();
    for (x, y) in a.results.iter().zip(&b.results) {
        if x.dataset_hash != y.dataset_hash {
            return Err(Error::InvalidArgument(format!(
                "replicate {} was run on different data",
                x.replicate
            )));
        }
        if let (Ok(p), Ok(q)) = (&x.rmse, &y.rmse) {
            d.push(p - q);
        }
    }
    if d.len() < 2 {
        return Err(Error::InsufficientDraws { needed: 2, have: d.len() });
    }
    let (mean, sd) = mean_sd(&d);
    Ok((mean, sd.unwrap_or(0.0) / (d.len() as f64).sqrt()))
}

impl GammaSweep {
    pub fn report(&self, gamma: f64) -> Option<&MethodReport> {
        self.gammas.iter().position(|g| *g == gamma).map(|k| &self.reports[k])
    }

    /// `gamma,replicate,seed,dataset_hash,rmse,error`.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["gamma", "replicate", "seed", "dataset_hash", "rmse", "error"])?;
        for (g, rep) in self.gammas.iter().zip(&self.reports) {
            for r in &rep.results {
                let (v, e) = match &r.rmse {
                    Ok(v) => (v.to_string(), String::new()),
                    Err(e) => (String::new(), e.clone()),
                };
                w.write_record([
                    g.to_string(),
                    r.replicate.to_string(),
                    r.seed.to_string(),
                    r.dataset_hash.clone(),
                    v,
                    e,
                ])?;
            }
        }
        into_bytes(w)
    }

    /// `gamma,mean,sd,failures`.
    pub fn summary_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["gamma", "mean", "sd", "failures"])?;
        for (g, rep) in self.gammas.iter().zip(&self.reports) {
            w.write_record([
                g.to_string(),
                rep.mean.to_string(),
                rep.sd.map_or(String::new(), |s| s.to_string()),
                rep.failures.to_string(),
            ])?;
        }
        into_bytes(w)
    }
}

/// Rerun the first method of `config` at every γ in `gammas` on a shared data stream.
pub fn gamma_sensitivity(config: &BenchmarkConfig, gammas: &[f64]) -> Result<GammaSweep> {
    config.validate()?;
    if gammas.is_empty() {
        return Err(Error::InvalidArgument("empty gamma grid".into()));
    }
    let base = config.methods[0];
    let mut reports = Vec::with_capacity(gammas.len());
    for &g in gammas {
        let cfg = BenchmarkConfig {
            methods: vec![with_gamma(&base, g)?],
            ..config.clone()
        };
        let rep = run_benchmark(&cfg)?;
        reports.push(rep.methods.into_iter().next().expect("one method per run"));
    }
    for rep in &reports[1..] {
        for (a, b) in rep.results.iter().zip(&reports[0].results) {
            if a.dataset_hash != b.dataset_hash {
                return Err(Error::NumericFailure(format!(
                    "replicate {} saw different data across gamma values",
                    a.replicate
                )));
            }
        }
    }
    Ok(GammaSweep {
        gammas: gammas.to_vec(),
        reports,
    })
}

// ---------------------------------------------------------------------------
// contraction study

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionConfig {
    pub model: SimModel,
    pub m: usize,
    /// Sparsity used for the reference rate `√(s log(M/s)/n)`.
    pub s: usize,
    pub ns: Vec<usize>,
    pub replicates: usize,
    pub master_seed: u64,
    pub hyper: LaHyper,
    /// Override of the model's noise level (`None` keeps the default).
    pub noise_sd: Option<f64>,
    pub noiseless: bool,
}

impl ContractionConfig {
    pub fn new(model: SimModel, m: usize, s: usize, ns: Vec<usize>, replicates: usize, master_seed: u64) -> Result<Self> {
        Ok(Self {
            model,
            m,
            s,
            ns,
            replicates,
            master_seed,
            hyper: LaHyper::defaults(m)?,
            noise_sd: None,
            noiseless: false,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionRow {
    pub n: usize,
    /// Mean over replicates of the draw-averaged error.
    pub mean_error: f64,
    pub se: f64,
    pub per_replicate: Vec<f64>,
    /// `√(s log(M/s)/n)`
    pub reference_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionTable {
    pub rows: Vec<ContractionRow>,
    /// Slope of `log mean_error` on `log n`.
    pub fit: LineFit,
}

impl ContractionTable {
    /// `n,mean_error,se,reference_rate`.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "mean_error", "se", "reference_rate"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.mean_error.to_string(),
                r.se.to_string(),
                r.reference_rate.to_string(),
            ])?;
        }
        into_bytes(w)
    }

    /// `slope,intercept,r_squared`.
    pub fn fit_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["slope", "intercept", "r_squared"])?;
        w.write_record([
            self.fit.slope.to_string(),
            self.fit.intercept.to_string(),
            self.fit.r_squared.to_string(),
        ])?;
        into_bytes(w)
    }
}

/// `(1/draws) Σ_draws ‖n^{−1/2} F(θ − θ*)‖₂`.
pub fn mean_prediction_error(samples: &PosteriorSamples, f: &crate::matrix::PredictionMatrix, truth: &[f64]) -> f64 {
    let n = f.rows() as f64;
    let mut diff = vec![0.0; truth.len()];
    let mut out = vec![0.0; f.rows()];
    let mut total = 0.0;
    for d in &samples.draws {
        for ((o, c), t) in diff.iter_mut().zip(&d.coefficients).zip(truth) {
            *o = c - t;
        }
        f.mul_vec_into(&diff, &mut out);
        total += (out.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    }
    total / samples.len() as f64
}

/// Posterior prediction error of LA on a linear model across sample sizes, with a
/// log-log slope fit.
pub fn contraction_study(config: &ContractionConfig) -> Result<ContractionTable> {
    if config.ns.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "contraction study needs at least 4 sample sizes, got {}",
            config.ns.len()
        )));
    }
    if !config.model.is_linear() {
        return Err(Error::InvalidArgument("contraction study needs a linear model".into()));
    }
    if config.replicates == 0 || config.s == 0 || config.s > config.m {
        return Err(Error::InvalidArgument(format!(
            "need replicates >= 1 and 1 <= s <= M (replicates={}, s={}, M={})",
            config.replicates, config.s, config.m
        )));
    }
    let method = Method::La(config.hyper).with_dim(config.m)?;
    let Method::La(hyper) = method else { unreachable!() };

    let jobs: Vec<(usize, usize)> = (0..config.ns.len())
        .flat_map(|k| (0..config.replicates).map(move |r| (k, r)))
        .collect();
    let errors: Vec<f64> = jobs
        .par_iter()
        .map(|&(k, r)| {
            let n = config.ns[k];
            let seed = config.master_seed.wrapping_add(r as u64);
            let mut spec = SimSpec::new(config.model, config.m, n, 1, derive_seed(seed, n as u64));
            if let Some(sd) = config.noise_sd {
                spec.noise_sd = sd;
            }
            spec.noiseless = config.noiseless;
            let data = generate(&spec)?;
            let f = data.train.design()?;
            let samples = run_chain_la(data.train.y(), &f, &hyper, derive_seed(seed, CHAIN_STREAM + n as u64))?;
            let truth = data.coefficients().expect("linear model");
            Ok(mean_prediction_error(&samples, &f, truth))
        })
        .collect::<Result<_>>()?;

    let rows: Vec<ContractionRow> = config
        .ns
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let per = errors[k * config.replicates..(k + 1) * config.replicates].to_vec();
            let (mean, sd) = mean_sd(&per);
            ContractionRow {
                n,
                mean_error: mean,
                se: sd.unwrap_or(0.0) / (per.len() as f64).sqrt(),
                reference_rate: (config.s as f64 * (config.m as f64 / config.s as f64).ln() / n as f64).sqrt(),
                per_replicate: per,
            }
        })
        .collect();
    let lx: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ly: Vec<f64> = rows.iter().map(|r| r.mean_error.ln()).collect();
    let fit = fit_line(&lx, &ly)?;
    Ok(ContractionTable { rows, fit })
}

// ---------------------------------------------------------------------------
// prior concentration

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationRow {
    pub gamma: f64,
    pub p_ball: f64,
    pub se_ball: f64,
    pub p_tail: f64,
    pub se_tail: f64,
    pub draws: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationSweep {
    pub m: usize,
    pub alpha: f64,
    pub s: usize,
    pub eps: f64,
    pub rows: Vec<ConcentrationRow>,
}

impl ConcentrationSweep {
    /// Fit of `log p_tail` on `γ − 1` over rows with `p_tail > 0`.
    pub fn tail_fit(&self) -> Result<LineFit> {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.p_tail > 0.0)
            .map(|r| (r.gamma - 1.0, r.p_tail.ln()))
            .collect();
        let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        fit_line(&x, &y)
    }

    /// `M,alpha,gamma,s,eps,draws,p_ball,se_ball,p_tail,se_tail`.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["M", "alpha", "gamma", "s", "eps", "draws", "p_ball", "se_ball", "p_tail", "se_tail"])?;
        for r in &self.rows {
            w.write_record([
                self.m.to_string(),
                self.alpha.to_string(),
                r.gamma.to_string(),
                self.s.to_string(),
                self.eps.to_string(),
                r.draws.to_string(),
                r.p_ball.to_string(),
                r.se_ball.to_string(),
                r.p_tail.to_string(),
                r.se_tail.to_string(),
            ])?;
        }
        into_bytes(w)
    }
}

/// Monte Carlo ball and tail probabilities of `Diri(α/M^γ)` at each γ, with `λ*`
/// uniform on the first `s` coordinates. Grid point `k` uses its own derived seed.
pub fn concentration_sweep(
    m: usize,
    alpha: f64,
    gammas: &[f64],
    s: usize,
    eps: f64,
    draws: usize,
    seed: u64,
) -> Result<ConcentrationSweep> {
    if s == 0 || s > m {
        return Err(Error::InvalidArgument(format!("s = {s} must lie in 1..={m}")));
    }
    let mut star = vec![0.0; m];
    star[..s].iter_mut().for_each(|v| *v = 1.0 / s as f64);
    let star = SimplexWeights::new(star)?;
    let rows = gammas
        .par_iter()
        .enumerate()
        .map(|(k, &g)| {
            let hyper = DirichletHyper::new(alpha, g, m)?;
            let mut rng = seeded(derive_seed(seed, k as u64));
            let est = estimate_concentration(&hyper, &star, s, eps, draws, &mut rng)?;
            Ok(ConcentrationRow {
                gamma: g,
                p_ball: est.p_ball,
                se_ball: est.se_ball,
                p_tail: est.p_tail,
                se_tail: est.se_tail,
                draws: est.draws_used,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConcentrationSweep { m, alpha, s, eps, rows })
}

// ---------------------------------------------------------------------------
// diagnostics

/// Credible level of the exported intervals.
pub const INTERVAL_LEVEL: f64 = 0.95;

/// Write `trace.csv` (coordinate, iteration, value), `scalars.csv` (iteration, phi,
/// scale), `intervals.csv` (coordinate, lo, median, hi) and `acceptance.csv` into
/// `dir`. Coordinates are 1-based.
pub fn export_diagnostics(samples: &PosteriorSamples, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    if samples.is_empty() {
        return Err(Error::InsufficientDraws { needed: 1, have: 0 });
    }
    let dir = dir.as_ref();
    create_dir(dir)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["coordinate", "iteration", "value"])?;
    for j in 0..samples.dim() {
        for (it, d) in samples.draws.iter().enumerate() {
            w.write_record([(j + 1).to_string(), (it + 1).to_string(), d.coefficients[j].to_string()])?;
        }
    }
    let trace = into_bytes(w)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["iteration", "phi", "scale"])?;
    for (it, d) in samples.draws.iter().enumerate() {
        w.write_record([
            (it + 1).to_string(),
            d.phi.to_string(),
            d.scale.map_or(String::new(), |a| a.to_string()),
        ])?;
    }
    let scalars = into_bytes(w)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["coordinate", "lo", "median", "hi"])?;
    for (j, c) in summarize_posterior(samples, INTERVAL_LEVEL)?.iter().enumerate() {
        w.write_record([(j + 1).to_string(), c.lo.to_string(), c.median.to_string(), c.hi.to_string()])?;
    }
    let intervals = into_bytes(w)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["phase", "block", "accepted", "proposed", "rate"])?;
    for (phase, acc) in [("burn_in", &samples.burn_in_acceptance), ("sampling", &samples.acceptance)] {
        let blocks = [
            ("weights", Some(acc.weights)),
            ("refresh", acc.refresh),
            ("scale", acc.scale),
            ("scale_refresh", acc.scale_refresh),
            ("signs", acc.signs),
        ];
        for (name, b) in blocks {
            if let Some(b) = b {
                w.write_record([
                    phase.to_string(),
                    name.to_string(),
                    b.accepted.to_string(),
                    b.proposed.to_string(),
                    b.rate().to_string(),
                ])?;
            }
        }
    }
    let acceptance = into_bytes(w)?;

    let mut paths = Vec::new();
    for (name, bytes) in [
        ("trace.csv", trace),
        ("scalars.csv", scalars),
        ("intervals.csv", intervals),
        ("acceptance.csv", acceptance),
    ] {
        let p = dir.join(name);
        write_atomic(&p, &bytes)?;
        paths.push(p);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rmse_by_hand() {
        assert_eq!(rmse(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert!((rmse(&[3.0, 4.0], &[0.0, 0.0]).unwrap() - 12.5f64.sqrt()).abs() < 1e-15);
        assert!(rmse(&[1.0], &[1.0, 2.0]).is_err());
        assert!(rmse(&[], &[]).is_err());
    }

    #[test]
    fn constant_predictor_matches_sd() {
        let spec = SimSpec { noiseless: true, ..SimSpec::new(SimModel::S, 5, 10, 20_000, 3) };
        let data = generate(&spec).unwrap();
        let y = data.test.y();
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        let r = rmse(&vec![mean; y.len()], y).unwrap();
        // population sd of the noiseless model: √(Σβ²) = √2.77
        assert!((r - 2.77f64.sqrt()).abs() < 0.05, "{r}");
    }

    #[test]
    fn line_fit_exact() {
        let f = fit_line(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(fit_line(&[1.0, 1.0], &[0.0, 2.0]).is_err());
    }

    fn fake_report() -> RmseReport {
        let res = |r: usize, v: std::result::Result<f64, String>| ReplicateResult {
            replicate: r,
            seed: 10 + r as u64,
            dataset_hash: format!("h{r}"),
            rmse: v,
        };
        RmseReport {
            methods: vec![
                MethodReport::from_results(
                    "la".into(),
                    vec![res(0, Ok(0.5)), res(1, Ok(0.1 + 0.2)), res(2, Err("chain_abort: x, y".into()))],
                ),
                MethodReport::from_results("ca".into(), vec![res(0, Ok(1.0)), res(1, Ok(2.0)), res(2, Ok(3.0))]),
            ],
            wall_seconds: 0.0,
        }
    }

    #[test]
    fn report_arithmetic_and_round_trip() {
        let rep = fake_report();
        let la = rep.method("la").unwrap();
        assert_eq!(la.failures, 1);
        let (m, sd) = mean_sd(&[0.5, 0.1 + 0.2]);
        assert_eq!(la.mean, m);
        assert_eq!(la.sd, sd);
        assert!(la.min <= la.mean && la.mean <= la.max);
        let ca = rep.method("ca").unwrap();
        assert_eq!(ca.mean, 2.0);
        assert_eq!(ca.sd, Some(1.0));
        assert_eq!(RmseReport::from_csv(&rep.to_csv().unwrap()).unwrap(), rep);
    }

    #[test]
    fn single_replicate_has_no_sd() {
        let r = MethodReport::from_results(
            "la".into(),
            vec![ReplicateResult { replicate: 0, seed: 0, dataset_hash: String::new(), rmse: Ok(1.0) }],
        );
        assert_eq!(r.sd, None);
    }

    #[test]
    fn paired_difference_checks_hashes() {
        let rep = fake_report();
        let (d, se) = paired_difference(rep.method("ca").unwrap(), rep.method("la").unwrap()).unwrap();
        assert!((d - (0.5 + (2.0 - 0.3)) / 2.0).abs() < 1e-12);
        assert!(se > 0.0);
        let mut other = rep.method("la").unwrap().clone();
        other.results[0].dataset_hash = "zz".into();
        assert!(paired_difference(rep.method("ca").unwrap(), &other).is_err());
    }

    #[test]
    fn hashes_pair_across_methods() {
        let mut h = LaHyper::defaults(5).unwrap();
        h.n_iter = 200;
        h.burn_in = 100;
        let config = BenchmarkConfig {
            spec: SimSpec::new(SimModel::S, 5, 30, 50, 0),
            methods: vec![Method::La(h), Method::ca_defaults(5).unwrap()],
            replicates: 2,
            master_seed: 77,
            n_cubic: 0,
        };
        let mut config = config;
        if let Method::Ca(c) = &mut config.methods[1] {
            c.n_iter = 200;
            c.burn_in = 100;
        }
        let rep = run_benchmark(&config).unwrap();
        let (a, b) = (&rep.methods[0], &rep.methods[1]);
        for (x, y) in a.results.iter().zip(&b.results) {
            assert_eq!(x.dataset_hash, y.dataset_hash);
            assert_eq!(x.seed, 77 + x.replicate as u64);
        }
        assert_ne!(a.results[0].dataset_hash, a.results[1].dataset_hash);
        assert_eq!(run_benchmark(&config).unwrap().to_csv().unwrap(), rep.to_csv().unwrap());
    }

    #[test]
    fn zero_replicates_rejected() {
        let mut c = BenchmarkConfig::new(SimSpec::new(SimModel::S, 5, 30, 50, 0), 1, 0).unwrap();
        c.replicates = 0;
        assert!(run_benchmark(&c).is_err());
    }
}
