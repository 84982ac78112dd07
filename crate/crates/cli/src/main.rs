use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bridgekit::baselines::EnetConfig;
use bridgekit::datasets::{
    gen_sim, gen_xor_test, gen_xor_train, load_csv, load_prostate, prostate_design, standardize, Dataset, SimSpec,
};
use bridgekit::estimators::{BridgeConfig, DEFAULT_JITTER, DEFAULT_REFINE_ITERS};
use bridgekit::evaluation::json::to_json_string;
use bridgekit::evaluation::{
    coefficient_path, count_nonzero, cross_validate, fit_tuples, monte_carlo_bench, parse_grid, prostate_bench,
    xor_bench, BenchGrids, Hyper, Method, ParamGrid, SweepAxis, DEFAULT_NONZERO_TOL,
};
use bridgekit::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const BENCHMARKS: [&str; 6] = ["xor", "sim1", "sim2", "sim3", "sim4", "prostate"];

#[derive(Parser)]
#[command(name = "bridgekit", version, about = "Closed-form bridge regression toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one model and write its coefficients as JSON.
    Fit(FitArgs),
    /// Trace coefficients over a lambda or k sweep as CSV.
    Profile(ProfileArgs),
    /// Cross-validate a hyperparameter grid and write the report as JSON.
    Cv(CvArgs),
    /// Run a benchmark and write the report as JSON.
    Bench(BenchArgs),
    /// Write a built-in dataset as CSV.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodName {
    Ols,
    Ridge,
    Pbridge,
    Lasso,
    Enet,
    Lqa,
}

#[derive(Args)]
struct DataArgs {
    /// CSV file with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Target column; repeat for several outputs. Defaults to the last column.
    #[arg(long)]
    target: Vec<String>,
    /// Standardize predictors to zero mean and unit sample deviation.
    #[arg(long)]
    standardize: bool,
    /// Prepend an all-ones column.
    #[arg(long)]
    add_intercept: bool,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    method: MethodName,
    #[arg(long, default_value_t = 2.0)]
    k: f64,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Elastic-net mixing weight of the l1 term.
    #[arg(long, default_value_t = 0.5)]
    l1_ratio: f64,
    /// Ridge shift on every inverse of the bridge solvers.
    #[arg(long)]
    epsilon_reg: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_REFINE_ITERS)]
    refine_iters: usize,
    /// Leave column 0 (all ones) out of the penalty.
    #[arg(long)]
    unpenalized_intercept: bool,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Coefficients below this magnitude count as zero.
    #[arg(long, default_value_t = DEFAULT_NONZERO_TOL)]
    threshold: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// `lambda=start:step:end[,...]` or `k=...`.
    #[arg(long)]
    sweep: String,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CvArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// `lambda=...`, `k=...` or `l1_ratio=...`; repeatable.
    #[arg(long)]
    grid: Vec<String>,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// One of xor, sim1, sim2, sim3, sim4, prostate.
    name: String,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override a search range (`lambda=`, `k=`, `l1_ratio=`); repeatable.
    #[arg(long)]
    grid: Vec<String>,
    /// Prostate table for the prostate benchmark.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// One of xor-train, xor-test, sim1..sim4 (training split).
    name: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Solver(String),
    Grid(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Grid(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Solver(m) | Failure::Grid(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Io { .. }
            | Error::ParseError { .. }
            | Error::RaggedRows { .. }
            | Error::DimensionMismatch(_)
            | Error::OutOfRangeLabel { .. }
            | Error::InvalidParameter(_)
            | Error::InvalidK { .. } => Failure::Input(msg),
            Error::InvalidGrid(_) | Error::FoldTooSmall { .. } => Failure::Grid(msg),
            Error::SingularSystem
            | Error::NonSymmetric(_)
            | Error::DivergedFixedPoint { .. }
            | Error::NonFinite(_)
            | Error::TooManyFailures(_) => Failure::Solver(msg),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var("BRIDGEKIT_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring BRIDGEKIT_THREADS={n:?}"),
        }
    }
    let result = match cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Cv(a) => cmd_cv(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn load(args: &DataArgs) -> Result<Dataset, Failure> {
    let targets: Vec<&str> = args.target.iter().map(String::as_str).collect();
    let ds = if targets.is_empty() {
        let header = read_header(&args.data)?;
        let last = header.last().cloned().ok_or_else(|| Failure::Input("empty header".into()))?;
        load_csv(&args.data, &[last.as_str()], true)?
    } else {
        load_csv(&args.data, &targets, true)?
    };
    let ds = if args.standardize { standardize(&ds)? } else { ds };
    Ok(if args.add_intercept { ds.with_intercept() } else { ds })
}

fn read_header(path: &Path) -> Result<Vec<String>, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let header = reader
        .headers()
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(header.iter().map(str::to_string).collect())
}

fn method_of(m: &ModelArgs) -> Method {
    match m.method {
        MethodName::Ols => Method::Ols,
        MethodName::Ridge => Method::Ridge,
        MethodName::Pbridge => Method::Pbridge(BridgeConfig {
            k: m.k,
            lambda: m.lambda,
            epsilon_reg: m.epsilon_reg,
            refine_iters: m.refine_iters,
            jitter: DEFAULT_JITTER,
            penalize_intercept: !m.unpenalized_intercept,
            ..BridgeConfig::default()
        }),
        MethodName::Lasso => Method::ElasticNet(EnetConfig::lasso(m.lambda).with_intercept(m.unpenalized_intercept)),
        MethodName::Enet => {
            Method::ElasticNet(EnetConfig::new(m.lambda, m.l1_ratio).with_intercept(m.unpenalized_intercept))
        }
        MethodName::Lqa => Method::Lqa { iters: m.refine_iters },
    }
}

fn hyper_of(m: &ModelArgs) -> Hyper {
    match m.method {
        MethodName::Ols | MethodName::Ridge => Hyper::new(m.lambda),
        MethodName::Pbridge | MethodName::Lqa => Hyper::with_k(m.lambda, m.k),
        MethodName::Lasso => Hyper::with_l1_ratio(m.lambda, 1.0),
        MethodName::Enet => Hyper::with_l1_ratio(m.lambda, m.l1_ratio),
    }
}

fn emit(output: Option<&Path>, text: &str) -> CmdResult {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum PerTarget<T> {
    Single(T),
    Many(Vec<T>),
}

#[derive(Serialize)]
struct FitOutput {
    method: String,
    k: Option<f64>,
    lambda: f64,
    feature_names: Vec<String>,
    coefficients: PerTarget<Vec<f64>>,
    nonzero_indices: PerTarget<Vec<usize>>,
}

fn per_target<T>(mut v: Vec<T>) -> PerTarget<T> {
    if v.len() == 1 {
        PerTarget::Single(v.pop().expect("one target"))
    } else {
        PerTarget::Many(v)
    }
}

fn cmd_fit(a: FitArgs) -> CmdResult {
    let ds = load(&a.data)?;
    let method = method_of(&a.model);
    let hyper = hyper_of(&a.model);
    let coeffs = fit_tuples(&method, &ds.x, &ds.y, &[hyper]).pop().expect("one tuple")?;
    if !coeffs.is_finite() {
        return Err(Failure::Solver("fit produced non-finite coefficients".into()));
    }
    let cols: Vec<Vec<f64>> = (0..coeffs.cols()).map(|l| coeffs.col(l)).collect();
    let nz: Vec<Vec<usize>> = cols.iter().map(|c| count_nonzero(c, a.threshold).indices).collect();
    let out = FitOutput {
        method: method.name().to_string(),
        k: hyper.k,
        lambda: hyper.lambda,
        feature_names: ds.feature_names.clone(),
        coefficients: per_target(cols),
        nonzero_indices: per_target(nz),
    };
    emit(a.output.as_deref(), &to_json_string(&out)?)
}

fn cmd_profile(a: ProfileArgs) -> CmdResult {
    let grid = parse_grid(&a.sweep)?;
    let axis = SweepAxis::parse(&grid.name)?;
    let ds = load(&a.data)?;
    let trace = coefficient_path(&ds, &method_of(&a.model), axis, &grid.values)?;
    for (v, e) in &trace.skipped {
        eprintln!("warning: skipped {}={v}: {e}", axis.label());
    }
    if trace.points.is_empty() {
        return Err(Failure::Solver("every sweep point failed".into()));
    }
    emit(a.output.as_deref(), &trace.to_csv())
}

fn param_grid(specs: &[String]) -> Result<ParamGrid, Failure> {
    let mut grid = ParamGrid::default();
    for s in specs {
        let g = parse_grid(s)?;
        match g.name.as_str() {
            "lambda" => grid.lambda = g.values,
            "k" => grid.k = g.values,
            "l1_ratio" => grid.l1_ratio = g.values,
            other => return Err(Failure::Grid(format!("unknown grid {other:?}; use lambda, k or l1_ratio"))),
        }
    }
    Ok(grid)
}

fn cmd_cv(a: CvArgs) -> CmdResult {
    let grid = param_grid(&a.grid)?;
    let ds = load(&a.data)?;
    let report = cross_validate(&ds, &method_of(&a.model), &grid, a.folds, a.seed)?;
    let best = &report.best;
    let mut line = format!("best lambda={}", best.lambda);
    if let Some(k) = best.k {
        write!(line, " k={k}").unwrap();
    }
    if let Some(r) = best.l1_ratio {
        write!(line, " l1_ratio={r}").unwrap();
    }
    writeln!(line, " cv_mse={}", report.best_score).unwrap();
    let json = to_json_string(&report)?;
    match a.output.as_deref() {
        Some(p) => {
            emit(Some(p), &json)?;
            print!("{line}");
        }
        None => {
            print!("{json}");
            eprint!("{line}");
        }
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    if !BENCHMARKS.contains(&a.name.as_str()) {
        return Err(Failure::Input(format!(
            "unknown benchmark {:?}; valid names: {}",
            a.name,
            BENCHMARKS.join(", ")
        )));
    }
    let overrides = param_grid(&a.grid)?;
    let mut grids = BenchGrids::paper();
    if !overrides.lambda.is_empty() {
        grids.lambda = overrides.lambda;
    }
    if !overrides.k.is_empty() {
        grids.k = overrides.k;
    }
    if !overrides.l1_ratio.is_empty() {
        grids.l1_ratio = overrides.l1_ratio;
    }
    let report = match a.name.as_str() {
        "xor" => xor_bench(a.trials, a.seed)?,
        "prostate" => {
            let path = a
                .data
                .as_deref()
                .ok_or_else(|| Failure::Input("the prostate benchmark needs --data <prostate table>".into()))?;
            let (train, test) = prostate_design(&load_prostate(path)?)?;
            prostate_bench(&train, &test, &grids, a.folds, a.seed)?
        }
        sim => {
            let id: u8 = sim[3..].parse().expect("validated name");
            monte_carlo_bench(id, a.trials, &grids, a.seed)?
        }
    };
    for m in &report.methods {
        eprintln!(
            "{:<14} {:>12.4} ({:.4})  nonzero {}",
            m.method, m.median_mse, m.se, m.median_nonzero
        );
    }
    emit(a.output.as_deref(), &to_json_string(&report)?)
}

fn dataset_csv(ds: &Dataset) -> String {
    let mut out = String::new();
    let names: Vec<&str> = ds.feature_names.iter().chain(&ds.target_names).map(String::as_str).collect();
    writeln!(out, "{}", names.join(",")).unwrap();
    for i in 0..ds.n_samples() {
        let row: Vec<String> = ds.x.row(i).iter().chain(ds.y.row(i)).map(|v| v.to_string()).collect();
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    out
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let ds = match a.name.as_str() {
        "xor-train" => gen_xor_train(),
        "xor-test" => gen_xor_test(a.seed),
        name if name.starts_with("sim") => {
            let id: u8 = name[3..]
                .parse()
                .map_err(|_| Failure::Input(format!("unknown dataset {name:?}")))?;
            gen_sim(&SimSpec::example(id)?, a.seed)?.train
        }
        other => {
            return Err(Failure::Input(format!(
                "unknown dataset {other:?}; valid names: xor-train, xor-test, sim1, sim2, sim3, sim4"
            )))
        }
    };
    emit(a.output.as_deref(), &dataset_csv(&ds))
}
