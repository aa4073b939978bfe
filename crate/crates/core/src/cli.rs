//! Command-line front end.
//!
//! JSON reports go to stdout (or `--output`), one-line summaries to stderr.
//! Exit status: 0 success, 1 algorithmic failure, 2 usage or input error,
//! 3 numeric failure. Failures still print a JSON report.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coloring::{
    beck_fiala_color, default_alpha, spencer_color, BeckFialaParams, ColoringRun, SpencerParams,
};
use crate::error::{Error, Result};
use crate::instances::{generate, GeneratorSpec, Instance, Kind};
use crate::io;
use crate::model::{
    discrepancy, indicator_matrix, vector_discrepancy, Coloring, ConstraintSet, FractionalColoring,
};
use crate::oracle::{brute_force_disc, verify_partial};
use crate::rng::{mix64, stream, BASELINE_STREAM, WALK_STREAM};
use crate::walk::{edge_walk, partial_color, PartialColorConfig, Sampler, DEFAULT_EPS_SLACK};

/// Environment variable capping the worker threads used by `bench`.
pub const THREADS_ENV: &str = "EDGEWALK_THREADS";

const DEFAULT_WALK_DELTA: f64 = 0.08;

#[derive(Debug, Parser)]
#[command(name = "edgewalk", version, about = "Discrepancy minimization by constrained Gaussian walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance.
    Gen(GenArgs),
    /// One partial coloring with retries.
    Partial(PartialArgs),
    /// Full coloring by the recursive partial-coloring pipeline.
    Spencer(SpencerArgs),
    /// Full coloring for bounded-degree systems.
    Beckfiala(BeckFialaArgs),
    /// Discrepancy of a given coloring.
    Disc(DiscArgs),
    /// Exact discrepancy by enumeration (n <= 24).
    Brute(BruteArgs),
    /// Check a fractional point against the partial-coloring conditions.
    Verify(VerifyArgs),
    /// Statistics over many independent walks.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Set system file (`n m` header, one set per line).
    #[arg(long, conflicts_with_all = ["matrix", "gen", "spec"])]
    pub input: Option<PathBuf>,
    /// Constraint matrix as CSV, one row per line.
    #[arg(long, conflicts_with_all = ["gen", "spec"])]
    pub matrix: Option<PathBuf>,
    /// Generate the instance inline with this generator.
    #[arg(long, value_parser = parse_kind)]
    pub gen: Option<Kind>,
    /// Generator spec as JSON text or a path to a JSON file.
    #[arg(long, conflicts_with = "gen")]
    pub spec: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Membership probability for `bernoulli`.
    #[arg(long)]
    pub p: Option<f64>,
    /// Set size for `k-uniform`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Sets per element for `low-degree`.
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    #[arg(long, default_value_t = DEFAULT_WALK_DELTA)]
    pub delta: f64,
    /// Step size; derived from delta, n, m and C when absent.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub big_c: Option<f64>,
    #[arg(long, default_value_t = 60)]
    pub retries: usize,
    /// Containment slack.
    #[arg(long, default_value_t = DEFAULT_EPS_SLACK)]
    pub tol: f64,
    /// Uniform threshold for unit-normalized rows; default `4 sqrt(ln(32 m / n))`.
    #[arg(long, conflicts_with = "thresholds")]
    pub c: Option<f64>,
    /// File with one threshold per row.
    #[arg(long)]
    pub thresholds: Option<PathBuf>,
    #[arg(long, value_parser = parse_sampler, default_value = "active-span")]
    pub sampler: Sampler,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PartialArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Start point; zeros when absent.
    #[arg(long)]
    pub x0: Option<PathBuf>,
    /// Walk even if the thresholds fail the feasibility condition.
    #[arg(long)]
    pub allow_infeasible: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpencerArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub big_c: Option<f64>,
    /// Walk attempts per round.
    #[arg(long)]
    pub retries: Option<usize>,
    #[arg(long)]
    pub max_rounds: Option<usize>,
    #[arg(long)]
    pub rounding_retries: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BeckFialaArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Maximum element frequency; the true maximum when absent.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Threshold constant.
    #[arg(long)]
    pub bf_c: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub big_c: Option<f64>,
    #[arg(long)]
    pub retries: Option<usize>,
    #[arg(long)]
    pub max_rounds: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DiscArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Coloring (or fractional point for matrix input).
    #[arg(long)]
    pub coloring: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BruteArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long)]
    pub x: PathBuf,
    #[arg(long)]
    pub x0: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn parse_kind(s: &str) -> std::result::Result<Kind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_sampler(s: &str) -> std::result::Result<Sampler, String> {
    match s {
        "active-span" => Ok(Sampler::ActiveSpan),
        "explicit-basis" => Ok(Sampler::ExplicitBasis),
        other => Err(format!("unknown sampler `{other}`")),
    }
}

/// Result of one command: the JSON report and a human summary.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub summary: String,
    pub status: i32,
}

impl Report {
    fn ok(json: Value, summary: String) -> Self {
        Self {
            json,
            summary,
            status: 0,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_numeric() {
        3
    } else if err.is_algorithmic() {
        1
    } else {
        2
    }
}

/// JSON report for a failed command.
pub fn error_report(err: &Error) -> Value {
    let mut v = json!({
        "error": err.to_string(),
        "exit_code": exit_code(err),
    });
    if let Some(best) = err.best_outcome() {
        v["best"] = serde_json::to_value(best).expect("outcome serializes");
    }
    if let Error::RoundFailed { round, unfixed, .. } = err {
        v["round"] = json!(round);
        v["unfixed"] = json!(unfixed);
    }
    v
}

/// Parses arguments, runs, writes output; returns the exit status.
pub fn main() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let output = output_path(&cli.command).cloned();
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => Report {
            json: error_report(&e),
            summary: format!("error: {e}"),
            status: exit_code(&e),
        },
    };
    if !report.summary.is_empty() {
        eprintln!("{}", report.summary);
    }
    let text = match &report.json {
        // `gen` without --output prints the instance itself.
        Value::String(instance) => instance.trim_end().to_string(),
        other => other.to_string(),
    };
    let written = match (&cli.command, output) {
        (Command::Gen(_), _) | (_, None) => {
            println!("{text}");
            Ok(())
        }
        (_, Some(path)) => std::fs::write(&path, text + "\n").map_err(Error::from),
    };
    match written {
        Ok(()) => report.status,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn output_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Gen(a) => a.common.output.as_ref(),
        Command::Partial(a) => a.common.output.as_ref(),
        Command::Spencer(a) => a.common.output.as_ref(),
        Command::Beckfiala(a) => a.common.output.as_ref(),
        Command::Disc(a) => a.common.output.as_ref(),
        Command::Brute(a) => a.common.output.as_ref(),
        Command::Verify(a) => a.common.output.as_ref(),
        Command::Bench(a) => a.common.output.as_ref(),
    }
}

pub fn execute(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Partial(a) => cmd_partial(a),
        Command::Spencer(a) => cmd_spencer(a),
        Command::Beckfiala(a) => cmd_beckfiala(a),
        Command::Disc(a) => cmd_disc(a),
        Command::Brute(a) => cmd_brute(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn generator_spec(a: &InstanceArgs, seed: u64) -> Result<Option<GeneratorSpec>> {
    if let Some(text) = &a.spec {
        let text = if Path::new(text).is_file() {
            std::fs::read_to_string(text)?
        } else {
            text.clone()
        };
        return GeneratorSpec::from_json(&text).map(Some);
    }
    let Some(kind) = a.gen else {
        return Ok(None);
    };
    let n = a.n.ok_or_else(|| Error::Validation("--gen needs --n".into()))?;
    let m = match kind {
        Kind::Singleton => a.m.unwrap_or(n),
        _ => a.m.ok_or_else(|| Error::Validation("--gen needs --m".into()))?,
    };
    let param = match kind {
        Kind::Bernoulli => a.p.unwrap_or(0.5),
        Kind::KUniform => a.k.ok_or_else(|| Error::Validation("k-uniform needs --k".into()))? as f64,
        Kind::LowDegree => a.t.ok_or_else(|| Error::Validation("low-degree needs --t".into()))? as f64,
        Kind::Singleton | Kind::MatrixGaussian => 0.0,
    };
    Ok(Some(GeneratorSpec::new(kind, n, m, param, seed)))
}

fn load_instance(a: &InstanceArgs, seed: u64) -> Result<Instance> {
    if let Some(path) = &a.input {
        return Ok(Instance::Sets(io::load_set_system(path)?));
    }
    if let Some(path) = &a.matrix {
        return Ok(Instance::Matrix(io::load_matrix(path)?));
    }
    match generator_spec(a, seed)? {
        Some(spec) => generate(&spec),
        None => Err(Error::Validation(
            "give an instance with --input, --matrix, --gen or --spec".into(),
        )),
    }
}

fn rows_of(instance: &Instance) -> ConstraintSet {
    match instance {
        Instance::Sets(s) => indicator_matrix(s),
        Instance::Matrix(c) => c.clone(),
    }
}

fn with_thresholds(rows: ConstraintSet, walk: &WalkArgs) -> Result<ConstraintSet> {
    if let Some(path) = &walk.thresholds {
        return rows.with_thresholds(io::load_vector(path)?);
    }
    let c = walk.c.unwrap_or_else(|| default_alpha(rows.m(), rows.n()));
    rows.with_uniform_threshold(c)
}

fn start_point(path: Option<&PathBuf>, n: usize) -> Result<FractionalColoring> {
    match path {
        Some(p) => FractionalColoring::new(io::load_vector(p)?),
        None => Ok(FractionalColoring::zeros(n)),
    }
}

fn walk_config(walk: &WalkArgs, seed: u64) -> PartialColorConfig {
    let mut config = PartialColorConfig::new(walk.delta, walk.retries, seed);
    if let Some(c) = walk.big_c {
        config.big_c = c;
    }
    config.gamma = walk.gamma;
    config.eps_slack = walk.tol;
    config.sampler = walk.sampler;
    config
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn cmd_gen(a: &GenArgs) -> Result<Report> {
    let spec = generator_spec(&a.instance, a.common.seed)?
        .ok_or_else(|| Error::Validation("gen needs --gen or --spec".into()))?;
    let instance = generate(&spec)?;
    let text = match &instance {
        Instance::Sets(s) => io::format_set_system(s),
        Instance::Matrix(c) => io::format_matrix_csv(c),
    };
    let summary = format!("generated {:?} instance with n = {}, m = {}", spec.kind, spec.n, spec.m);
    match &a.common.output {
        Some(path) => {
            std::fs::write(path, &text)?;
            let mut json = to_value(&spec);
            json["output"] = json!(path);
            Ok(Report::ok(json, summary))
        }
        None => Ok(Report::ok(Value::String(text), summary)),
    }
}

fn cmd_partial(a: &PartialArgs) -> Result<Report> {
    let seed = a.common.seed;
    let instance = load_instance(&a.instance, seed)?;
    let rows = with_thresholds(rows_of(&instance), &a.walk)?;
    let x0 = start_point(a.x0.as_ref(), rows.n())?;
    let mut config = walk_config(&a.walk, seed);
    config.require_feasible = !a.allow_infeasible;
    let params = config.walk_params(rows.n(), rows.m())?;
    let result = partial_color(&rows, &x0, &config)?;
    let mut json = to_value(&result.outcome);
    json["attempts"] = json!(result.attempts);
    json["feasibility"] = to_value(&result.feasibility);
    json["delta"] = json!(params.delta);
    json["gamma"] = json!(params.gamma);
    json["seed"] = json!(seed);
    let summary = format!(
        "partial coloring: {} of {} coordinates near ±1 after {} attempt(s)",
        result.outcome.n_active_vars,
        rows.n(),
        result.attempts
    );
    Ok(Report::ok(json, summary))
}

fn pipeline_summary(name: &str, run: &ColoringRun) -> String {
    format!(
        "{name}: discrepancy {} (bound {:.2}) in {} round(s)",
        run.report.max_abs,
        run.bound(),
        run.rounds.len()
    )
}

fn cmd_spencer(a: &SpencerArgs) -> Result<Report> {
    let sys = load_instance(&a.instance, a.common.seed)?.into_sets()?;
    let mut params = SpencerParams::new(sys.n(), sys.m(), a.common.seed);
    if let Some(d) = a.delta {
        params.delta = d;
    }
    if let Some(c) = a.big_c {
        params.big_c = c;
    }
    if let Some(r) = a.retries {
        params.round_retries = r;
    }
    if let Some(r) = a.max_rounds {
        params.max_rounds = r;
    }
    if let Some(r) = a.rounding_retries {
        params.rounding_retries = r;
    }
    let run = spencer_color(&sys, &params)?;
    Ok(Report::ok(to_value(&run.pipeline_report()), pipeline_summary("spencer", &run)))
}

fn cmd_beckfiala(a: &BeckFialaArgs) -> Result<Report> {
    let sys = load_instance(&a.instance, a.common.seed)?.into_sets()?;
    let t = a.degree.unwrap_or_else(|| sys.max_frequency().max(1));
    let mut params = match a.bf_c {
        Some(c) => BeckFialaParams::with_big_c(t, sys.n(), a.common.seed, c)?,
        None => BeckFialaParams::new(t, sys.n(), a.common.seed)?,
    };
    if let Some(d) = a.delta {
        params.delta = d;
    }
    if let Some(c) = a.big_c {
        params.walk_big_c = c;
    }
    if let Some(r) = a.retries {
        params.round_retries = r;
    }
    if let Some(r) = a.max_rounds {
        params.max_rounds = r;
    }
    let run = beck_fiala_color(&sys, &params)?;
    Ok(Report::ok(to_value(&run.pipeline_report()), pipeline_summary("beck-fiala", &run)))
}

fn cmd_disc(a: &DiscArgs) -> Result<Report> {
    let instance = load_instance(&a.instance, a.common.seed)?;
    let values = io::load_vector(&a.coloring)?;
    let report = match &instance {
        Instance::Sets(sys) => {
            let chi = values
                .iter()
                .map(|&v| {
                    if v == 1.0 {
                        Ok(1)
                    } else if v == -1.0 {
                        Ok(-1)
                    } else {
                        Err(Error::Validation(format!("coloring entry {v} is not ±1")))
                    }
                })
                .collect::<Result<Vec<i8>>>()?;
            discrepancy(&Coloring::new(chi)?, sys)?
        }
        Instance::Matrix(rows) => vector_discrepancy(&values, &vec![0.0; values.len()], rows)?,
    };
    let summary = format!("discrepancy {}", report.max_abs);
    Ok(Report::ok(to_value(&report), summary))
}

fn cmd_brute(a: &BruteArgs) -> Result<Report> {
    let sys = load_instance(&a.instance, a.common.seed)?.into_sets()?;
    let result = brute_force_disc(&sys)?;
    let summary = format!("optimal discrepancy {} over {} colorings", result.opt_disc, result.n_enumerated);
    Ok(Report::ok(to_value(&result), summary))
}

fn cmd_verify(a: &VerifyArgs) -> Result<Report> {
    let instance = load_instance(&a.instance, a.common.seed)?;
    let rows = with_thresholds(rows_of(&instance), &a.walk)?;
    let x = io::load_vector(&a.x)?;
    let x0 = start_point(a.x0.as_ref(), rows.n())?;
    let v = verify_partial(&x, x0.as_slice(), &rows, a.walk.delta, a.walk.tol)?;
    let summary = format!(
        "verify: {} ({} near ±1, {} violating rows)",
        if v.ok { "ok" } else { "FAILED" },
        v.n_near_integral,
        v.violating.len()
    );
    let status = if v.ok { 0 } else { 1 };
    Ok(Report {
        json: to_value(&v),
        summary,
        status,
    })
}

/// Order statistics of a sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quantiles {
    pub min: f64,
    pub median: f64,
    pub p90: f64,
    pub max: f64,
    pub mean: f64,
}

impl Quantiles {
    pub fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let at = |q: f64| {
            let pos = q * (v.len() - 1) as f64;
            let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        Self {
            min: v[0],
            median: at(0.5),
            p90: at(0.9),
            max: v[v.len() - 1],
            mean: v.iter().sum::<f64>() / v.len() as f64,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub n: usize,
    pub m: usize,
    pub runs: u64,
    pub seed: u64,
    pub delta: f64,
    pub gamma: f64,
    pub t_steps: u64,
    pub success_rate: f64,
    pub contained_rate: f64,
    pub mean_active_vars: f64,
    pub mean_active_disc: f64,
    pub mean_norm_sq: f64,
    /// Discrepancy of `sign(x)` for each walk, on the original rows.
    pub walk_disc: Quantiles,
    /// Discrepancy of uniformly random colorings, one per run.
    pub baseline_disc: Quantiles,
}

/// Max-abs row sum of a `±1` vector in the original scale.
fn coloring_disc(instance: &Instance, rows: &ConstraintSet, chi: &Coloring) -> Result<f64> {
    Ok(match instance {
        Instance::Sets(sys) => discrepancy(chi, sys)?.max_abs,
        Instance::Matrix(_) => vector_discrepancy(&chi.to_f64(), &vec![0.0; rows.n()], rows)?.max_abs,
    })
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let k: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Validation(format!("{THREADS_ENV} = `{v}` is not a thread count")))?;
        builder = builder.num_threads(k.max(1));
    }
    builder
        .build()
        .map_err(|e| Error::Validation(format!("thread pool: {e}")))
}

pub fn bench(
    instance: &Instance,
    rows: &ConstraintSet,
    config: &PartialColorConfig,
    runs: u64,
    seed: u64,
) -> Result<BenchReport> {
    let (unit, _) = rows.normalized();
    let n = rows.n();
    let params = config.walk_params(n, unit.m())?;
    let x0 = FractionalColoring::zeros(n);
    let outcomes = thread_pool()?.install(|| {
        (0..runs)
            .into_par_iter()
            .map(|k| {
                let s = mix64(seed, k);
                let p = params.clone().seed(s);
                let out = edge_walk(&unit, &x0, &p, &mut stream(s, WALK_STREAM))?;
                let disc = coloring_disc(instance, rows, &out.x.sign_coloring())?;
                Ok((out, disc))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rng = stream(seed, BASELINE_STREAM);
    let baseline = (0..runs)
        .map(|_| {
            let chi = Coloring::new((0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect())?;
            coloring_disc(instance, rows, &chi)
        })
        .collect::<Result<Vec<f64>>>()?;

    let r = runs as f64;
    let mean = |f: &dyn Fn(&crate::walk::WalkOutcome) -> f64| outcomes.iter().map(|(o, _)| f(o)).sum::<f64>() / r;
    let walk_disc: Vec<f64> = outcomes.iter().map(|(_, d)| *d).collect();
    Ok(BenchReport {
        n,
        m: rows.m(),
        runs,
        seed,
        delta: params.delta,
        gamma: params.gamma,
        t_steps: params.t_steps,
        success_rate: mean(&|o| o.success as u8 as f64),
        contained_rate: mean(&|o| o.contained as u8 as f64),
        mean_active_vars: mean(&|o| o.n_active_vars as f64),
        mean_active_disc: mean(&|o| o.n_active_disc as f64),
        mean_norm_sq: mean(&|o| o.final_norm_sq),
        walk_disc: Quantiles::of(&walk_disc),
        baseline_disc: Quantiles::of(&baseline),
    })
}

fn cmd_bench(a: &BenchArgs) -> Result<Report> {
    let seed = a.common.seed;
    let instance = load_instance(&a.instance, seed)?;
    let rows = with_thresholds(rows_of(&instance), &a.walk)?;
    let config = walk_config(&a.walk, seed);
    let report = bench(&instance, &rows, &config, a.runs, seed)?;
    let summary = format!(
        "bench: {} runs, success rate {:.3}, mean active vars {:.2} of {}",
        report.runs, report.success_rate, report.mean_active_vars, report.n
    );
    Ok(Report::ok(to_value(&report), summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles() {
        let q = Quantiles::of(&[3.0, 1.0, 2.0, 4.0, 5.0]);
        assert_eq!((q.min, q.median, q.max, q.mean), (1.0, 3.0, 5.0, 3.0));
        assert!((q.p90 - 4.6).abs() < 1e-12);
        assert_eq!(Quantiles::of(&[7.0]).median, 7.0);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::NumericFailure { step: 3 }), 3);
        assert_eq!(exit_code(&Error::RoundingExhausted { attempts: 2 }), 1);
        assert_eq!(exit_code(&Error::Validation("x".into())), 2);
        let nested = Error::RoundFailed {
            round: 1,
            unfixed: 4,
            source: Box::new(Error::NumericFailure { step: 9 }),
        };
        assert_eq!(exit_code(&nested), 3);
        assert_eq!(error_report(&nested)["round"], 1);
    }

    #[test]
    fn parses_every_subcommand() {
        for args in [
            "edgewalk gen --gen bernoulli --n 8 --m 4 --p 0.5",
            "edgewalk partial --input a.txt --delta 0.08 --seed 7",
            "edgewalk spencer --gen bernoulli --n 8 --m 8",
            "edgewalk beckfiala --input a.txt --degree 3",
            "edgewalk disc --input a.txt --coloring c.txt",
            "edgewalk brute --input a.txt",
            "edgewalk verify --matrix a.csv --x x.txt --c 1.0",
            "edgewalk bench --gen bernoulli --n 64 --m 64 --p 0.5 --runs 200 --seed 1",
        ] {
            Cli::try_parse_from(args.split(' ')).unwrap_or_else(|e| panic!("{args}: {e}"));
        }
        assert!(Cli::try_parse_from("edgewalk bench --gen nope --n 1 --m 1".split(' ')).is_err());
        assert!(Cli::try_parse_from("edgewalk bench --gen bernoulli --runs 0".split(' ')).is_err());
    }
}
