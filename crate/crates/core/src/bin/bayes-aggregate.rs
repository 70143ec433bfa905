use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bayes_aggregate::bench::{
    concentration_sweep, contraction_study, export_diagnostics, gamma_sensitivity, run_benchmark,
    BenchmarkConfig, ContractionConfig,
};
use bayes_aggregate::csvio::{
    create_dir, dataset_to_csv, read_dataset, read_prediction_matrix, write_atomic,
};
use bayes_aggregate::dirichlet::DirichletHyper;
use bayes_aggregate::learners::default_learners;
use bayes_aggregate::pipeline::{aggregate, aggregate_matrix, Method, PipelineConfig};
use bayes_aggregate::sampler::ca::CaHyper;
use bayes_aggregate::sampler::la::LaHyper;
use bayes_aggregate::simgen::{generate, SimModel, SimSpec};
use bayes_aggregate::{Error, Result};

#[derive(Parser)]
#[command(name = "bayes-aggregate", version, about = "Bayesian convex and linear aggregation of regression predictors")]
struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Aggregate learners on a dataset, or aggregate a precomputed prediction matrix.
    Aggregate(AggregateArgs),
    /// RMSE benchmark on a synthetic model.
    Bench(BenchArgs),
    /// RMSE across a grid of gamma values on shared data.
    GammaSweep(GammaArgs),
    /// Posterior prediction error across sample sizes.
    Contract(ContractArgs),
    /// Monte Carlo concentration of the Dirichlet prior.
    Concentration(ConcentrationArgs),
    /// Write a synthetic train/test pair as CSV.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ca,
    La,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    S,
    Ns1,
    Ns2,
    Nonlin,
}

impl From<ModelArg> for SimModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::S => SimModel::S,
            ModelArg::Ns1 => SimModel::Ns1,
            ModelArg::Ns2 => SimModel::Ns2,
            ModelArg::Nonlin => SimModel::Nonlin,
        }
    }
}

#[derive(Args, Clone)]
struct ChainArgs {
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    #[arg(long, default_value_t = 1000)]
    burnin: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
}

impl ChainArgs {
    fn method(&self, mode: Mode, m: usize) -> Result<Method> {
        let dirichlet = DirichletHyper::new(self.alpha, self.gamma, m)?;
        Ok(match mode {
            Mode::Ca => Method::Ca(CaHyper {
                dirichlet,
                n_iter: self.iters,
                burn_in: self.burnin,
                ..CaHyper::defaults(m)?
            }),
            Mode::La => Method::La(LaHyper {
                dirichlet,
                n_iter: self.iters,
                burn_in: self.burnin,
                ..LaHyper::defaults(m)?
            }),
        })
    }
}

#[derive(Args)]
struct AggregateArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Dataset CSV (last column is the response); fits the built-in learners.
    #[arg(long, required_unless_present = "pred_matrix", conflicts_with = "pred_matrix")]
    data: Option<PathBuf>,
    /// Prediction matrix CSV `id,f_1,...,f_M,y` for the aggregation rows.
    #[arg(long)]
    pred_matrix: Option<PathBuf>,
    /// Refit predictions `id,f_1,...,f_M[,y]` for test rows (with --pred-matrix).
    #[arg(long, requires = "pred_matrix")]
    test_matrix: Option<PathBuf>,
    /// Test dataset CSV to predict (with --data).
    #[arg(long, requires = "data")]
    test_data: Option<PathBuf>,
    /// Share of rows used to fit the learners (with --data).
    #[arg(long, default_value_t = 0.75)]
    frac: f64,
    /// Random-subset cubic learners (with --data).
    #[arg(long, default_value_t = 6)]
    cubic: usize,
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Number of predictors (linear models) or features (nonlinear model).
    #[arg(long = "M")]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    ntest: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "la")]
    methods: Vec<Mode>,
    #[arg(long, default_value_t = 20)]
    replicates: usize,
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GammaArgs {
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long, value_enum, default_value = "la")]
    mode: Mode,
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2,3,4")]
    gammas: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    replicates: usize,
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    #[arg(long, default_value_t = 1000)]
    burnin: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ContractArgs {
    #[arg(long, value_enum, default_value = "s")]
    model: ModelArg,
    #[arg(long = "M", default_value_t = 100)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    s: usize,
    #[arg(long, value_delimiter = ',', default_value = "100,200,400,800")]
    ns: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    replicates: usize,
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConcentrationArgs {
    #[arg(long = "M")]
    m: usize,
    /// One or more comma-separated values.
    #[arg(long, value_delimiter = ',')]
    gamma: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 100_000)]
    draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; the table goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    create_dir(dir)?;
    write_atomic(dir.join(name), bytes)
}

fn weights_csv(names: &[String], weights: &[f64]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["learner", "weight"])?;
    for (n, v) in names.iter().zip(weights) {
        w.write_record([n.clone(), v.to_string()])?;
    }
    w.into_inner().map_err(|e| Error::NumericFailure(e.to_string()))
}

fn predictions_csv(ids: &[String], pred: &[f64], y: Option<&[f64]>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if y.is_some() {
        w.write_record(["id", "prediction", "y"])?;
    } else {
        w.write_record(["id", "prediction"])?;
    }
    for (i, (id, p)) in ids.iter().zip(pred).enumerate() {
        let mut row = vec![id.clone(), p.to_string()];
        if let Some(y) = y {
            row.push(y[i].to_string());
        }
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| Error::NumericFailure(e.to_string()))
}

fn cmd_aggregate(a: &AggregateArgs) -> Result<()> {
    if let Some(path) = &a.pred_matrix {
        let table = read_prediction_matrix(path)?;
        let y = table.y.as_ref().ok_or_else(|| {
            Error::InvalidArgument(format!("{} has no 'y' column", path.display()))
        })?;
        let method = a.chain.method(a.mode, table.matrix.cols())?;
        let agg = aggregate_matrix(&table.matrix, y, &method, a.seed)?;
        write_file(&a.out, "weights.csv", &weights_csv(&table.learners, &agg.weights)?)?;
        export_diagnostics(&agg.samples, &a.out)?;
        if let Some(tp) = &a.test_matrix {
            let test = read_prediction_matrix(tp)?;
            if test.learners != table.learners {
                return Err(Error::DimensionMismatch(format!(
                    "test matrix learners {:?} differ from {:?}",
                    test.learners, table.learners
                )));
            }
            let pred = agg.predict_matrix(&test.matrix)?;
            write_file(&a.out, "predictions.csv", &predictions_csv(&test.ids, &pred, test.y.as_deref())?)?;
        }
        return Ok(());
    }

    let path = a.data.as_ref().expect("clap enforces --data or --pred-matrix");
    let data = read_dataset(path)?;
    let learners = default_learners(a.cubic);
    let method = a.chain.method(a.mode, learners.len())?;
    let model = aggregate(
        &data,
        &learners,
        &PipelineConfig {
            method,
            train_frac: a.frac,
            seed: a.seed,
        },
    )?;
    write_file(&a.out, "weights.csv", &weights_csv(&model.ids, model.weights())?)?;
    export_diagnostics(&model.aggregation.samples, &a.out)?;
    if let Some(tp) = &a.test_data {
        let test = read_dataset(tp)?;
        let pred = model.predict_dataset(&test)?;
        let ids: Vec<String> = (1..=test.n()).map(|i| i.to_string()).collect();
        write_file(&a.out, "predictions.csv", &predictions_csv(&ids, &pred, Some(test.y()))?)?;
    }
    Ok(())
}

fn sim_spec(s: &SimArgs, seed: u64) -> SimSpec {
    SimSpec::new(s.model.into(), s.m, s.n, s.ntest, seed)
}

/// Number of aggregated predictors for a benchmark on `spec`.
fn bench_dim(spec: &SimSpec, cubic: usize) -> usize {
    if spec.model.is_linear() {
        spec.dim
    } else {
        default_learners(cubic).len()
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let spec = sim_spec(&a.sim, a.seed);
    let mut config = BenchmarkConfig::new(spec, a.replicates, a.seed)?;
    let m = bench_dim(&spec, config.n_cubic);
    config.methods = a.methods.iter().map(|mode| a.chain.method(*mode, m)).collect::<Result<_>>()?;
    let report = run_benchmark(&config)?;
    report.write(&a.out)?;
    eprintln!("bench finished in {:.1}s", report.wall_seconds);
    Ok(())
}

fn cmd_gamma(a: &GammaArgs) -> Result<()> {
    let spec = sim_spec(&a.sim, a.seed);
    let mut config = BenchmarkConfig::new(spec, a.replicates, a.seed)?;
    let chain = ChainArgs {
        iters: a.iters,
        burnin: a.burnin,
        alpha: a.alpha,
        gamma: 2.0,
    };
    config.methods = vec![chain.method(a.mode, bench_dim(&spec, config.n_cubic))?];
    let sweep = gamma_sensitivity(&config, &a.gammas)?;
    write_file(&a.out, "gamma_rmse.csv", &sweep.to_csv()?)?;
    write_file(&a.out, "gamma_summary.csv", &sweep.summary_csv()?)
}

fn cmd_contract(a: &ContractArgs) -> Result<()> {
    let mut config = ContractionConfig::new(a.model.into(), a.m, a.s, a.ns.clone(), a.replicates, a.seed)?;
    let Method::La(h) = a.chain.method(Mode::La, a.m)? else { unreachable!() };
    config.hyper = h;
    let table = contraction_study(&config)?;
    write_file(&a.out, "contraction.csv", &table.to_csv()?)?;
    write_file(&a.out, "contraction_fit.csv", &table.fit_csv()?)
}

fn cmd_concentration(a: &ConcentrationArgs) -> Result<()> {
    if a.gamma.is_empty() {
        return Err(Error::InvalidArgument("--gamma needs at least one value".into()));
    }
    let sweep = concentration_sweep(a.m, a.alpha, &a.gamma, a.s, a.eps, a.draws, a.seed)?;
    let bytes = sweep.to_csv()?;
    match &a.out {
        Some(dir) => write_file(dir, "concentration.csv", &bytes),
        None => {
            print!("{}", String::from_utf8_lossy(&bytes));
            Ok(())
        }
    }
}

fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    let data = generate(&sim_spec(&a.sim, a.seed))?;
    write_file(&a.out, "train.csv", &dataset_to_csv(&data.train)?)?;
    write_file(&a.out, "test.csv", &dataset_to_csv(&data.test)?)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Aggregate(a) => cmd_aggregate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::GammaSweep(a) => cmd_gamma(a),
        Command::Contract(a) => cmd_contract(a),
        Command::Concentration(a) => cmd_concentration(a),
        Command::Simulate(a) => cmd_simulate(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
            .and_then(|pool| pool.install(|| run(&cli))),
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ");
            eprintln!("error kind={} message=\"{msg}\"", e.kind());
            ExitCode::FAILURE
        }
    }
}
