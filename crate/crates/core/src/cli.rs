//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a bound was violated in a validation run, 2 usage
//! or configuration error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::estimator::{estimate_norm, tail_criterion_check, LambdaGrid, SampleSet, TailCriterionReport, DEFAULT_DELTA};
use crate::norm_bounds::IncrementSchedule;
use crate::orlicz::{phi_eval, phi_inverse, RankP};
use crate::report::{fmt_f64, to_json, D0Provenance, TailReport};
use crate::simulate::{generate_paths, sample, validate_theorem, DistributionSpec, IncrementLaw, MartingaleSpec, Preset};
use crate::tail_bounds::{azuma_norms, compare_bounds, crossover_epsilon, CrossoverResult};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const SEED_ENV: &str = "RANKP_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rankp", version, about = "Concentration bounds for subgaussian-of-rank-p random variables")]
pub struct Cli {
    /// Worker threads for parallel sections (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate φ_p, its conjugate φ_q and the inverse round trip.
    Phi(PhiArgs),
    /// Rank-p and classic Azuma bounds on a threshold grid.
    Bound(BoundArgs),
    /// Threshold above which the rank-p bound beats the classic one.
    Crossover(CrossoverArgs),
    /// Estimate the τ_{φ_p} norm from data and run the tail criterion.
    Estimate(EstimateArgs),
    /// Monte Carlo validation of the rank-p Azuma bound.
    Validate(ValidateArgs),
    /// Emit raw samples or path endpoints as text.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawArg {
    Uniform,
    Rademacher,
    Adaptive,
}

impl From<LawArg> for IncrementLaw {
    fn from(l: LawArg) -> Self {
        match l {
            LawArg::Uniform => IncrementLaw::UniformSigned,
            LawArg::Rademacher => IncrementLaw::Rademacher,
            LawArg::Adaptive => IncrementLaw::AdaptiveDependent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistArg {
    DoubleWeibull,
    HalfnormalPower,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Explicit comma-separated thresholds; overrides the grid flags.
    #[arg(long, value_parser = parse_list)]
    pub eps: Option<List>,
    #[arg(long)]
    pub eps_min: Option<f64>,
    /// Largest threshold (default: the sum of increment bounds).
    #[arg(long)]
    pub eps_max: Option<f64>,
    #[arg(long, default_value_t = 12)]
    pub eps_count: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub spacing: Spacing,
}

/// Comma-separated list of reals.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct List(pub Vec<f64>);

fn parse_list(s: &str) -> Result<List, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            if t.is_empty() {
                return Err(format!("empty entry in list {s:?}"));
            }
            t.parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(List)
}

#[derive(Debug, Clone, Args)]
pub struct PhiArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_parser = parse_list)]
    pub x: List,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_parser = parse_list)]
    pub schedule: List,
    /// Bound on the starting value's norm.
    #[arg(long, default_value_t = 0.0)]
    pub d0: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CrossoverArgs {
    #[arg(long)]
    pub p: f64,
    /// Increment bounds; gives c and d.
    #[arg(long, value_parser = parse_list, conflicts_with_all = ["c", "d"])]
    pub schedule: Option<List>,
    #[arg(long, requires = "d")]
    pub c: Option<f64>,
    #[arg(long, requires = "c")]
    pub d: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub p: f64,
    /// Numeric text input (whitespace separated); stdin when absent and no
    /// --dist is given.
    #[arg(long, conflicts_with = "dist")]
    pub input: Option<PathBuf>,
    /// Generate the samples instead of reading them.
    #[arg(long, value_enum, requires = "q")]
    pub dist: Option<DistArg>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Tail criterion constant C.
    #[arg(long = "tail-c", default_value_t = 2.0)]
    pub tail_c: f64,
    /// Tail criterion scale D (default: 1.1 × the estimated norm).
    #[arg(long = "tail-d")]
    pub tail_d: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<Preset>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, value_parser = parse_list)]
    pub schedule: Option<List>,
    #[arg(long, value_enum)]
    pub law: Option<LawArg>,
    /// Start distribution: point:X, uniform:A,B, rademacher:D,
    /// double-weibull:Q or halfnormal-power:Q.
    #[arg(long, value_parser = parse_start)]
    pub start: Option<DistributionSpec>,
    /// Declared bound on the start's norm (default: derived from the start).
    #[arg(long)]
    pub d0: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long = "paths", default_value_t = 100_000)]
    pub n_paths: usize,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, requires = "q", conflicts_with = "preset")]
    pub dist: Option<DistArg>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Emit "xi0 xin" path endpoints for a preset.
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<Preset>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    Preset::from_name(s).ok_or_else(|| {
        let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
        format!("unknown preset {s:?}; expected one of {}", names.join(", "))
    })
}

fn parse_start(s: &str) -> Result<DistributionSpec, String> {
    let (kind, params) = s.split_once(':').ok_or_else(|| format!("expected KIND:PARAMS, got {s:?}"))?;
    let vals = parse_list(params)?.0;
    let arity = |n: usize| {
        if vals.len() == n {
            Ok(())
        } else {
            Err(format!("{kind} takes {n} parameter(s), got {}", vals.len()))
        }
    };
    let spec = match kind {
        "point" => {
            arity(1)?;
            DistributionSpec::PointMass { x: vals[0] }
        }
        "uniform" => {
            arity(2)?;
            DistributionSpec::UniformBounded { a: vals[0], b: vals[1] }
        }
        "rademacher" => {
            arity(1)?;
            DistributionSpec::RademacherScaled { d: vals[0] }
        }
        "double-weibull" => {
            arity(1)?;
            DistributionSpec::DoubleWeibull { q: vals[0] }
        }
        "halfnormal-power" => {
            arity(1)?;
            DistributionSpec::HalfnormalPower { q: vals[0] }
        }
        other => return Err(format!("unknown start distribution {other:?}")),
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

/// Failure modes of a subcommand.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// What a subcommand produced and whether it passed.
struct Outcome {
    body: String,
    passed: bool,
}

/// Resolve the threshold grid.
pub fn resolve_grid(grid: &GridArgs, default_max: f64) -> Result<Vec<f64>, CliError> {
    if let Some(List(eps)) = &grid.eps {
        crate::tail_bounds::check_grid(eps)?;
        return Ok(eps.clone());
    }
    let max = grid.eps_max.unwrap_or(default_max);
    if !(max.is_finite() && max >= 0.0) {
        return Err(CliError::Usage(format!("--eps-max must be nonnegative, got {max}")));
    }
    if max == 0.0 {
        return Ok(vec![0.0]);
    }
    let count = grid.eps_count;
    if count == 0 {
        return Err(CliError::Usage("--eps-count must be positive".into()));
    }
    if count == 1 {
        return Ok(vec![max]);
    }
    let out = match grid.spacing {
        Spacing::Linear => {
            let min = grid.eps_min.unwrap_or(max / count as f64);
            if !(min >= 0.0 && min <= max) {
                return Err(CliError::Usage(format!("need 0 <= --eps-min <= --eps-max, got {min}")));
            }
            (0..count)
                .map(|k| min + (max - min) * k as f64 / (count - 1) as f64)
                .collect()
        }
        Spacing::Log => {
            let min = grid.eps_min.unwrap_or(max / 100.0);
            if !(min > 0.0 && min <= max) {
                return Err(CliError::Usage(format!("log spacing needs 0 < --eps-min <= --eps-max, got {min}")));
            }
            let ratio = (max / min).ln();
            (0..count)
                .map(|k| min * (ratio * k as f64 / (count - 1) as f64).exp())
                .collect()
        }
    };
    Ok(out)
}

#[derive(Serialize)]
struct PhiRow {
    x: f64,
    phi_p: f64,
    phi_q: f64,
    inverse_round_trip: f64,
}

#[derive(Serialize)]
struct PhiReport {
    version: &'static str,
    p: f64,
    q: f64,
    rows: Vec<PhiRow>,
}

fn cmd_phi(args: &PhiArgs) -> Result<Outcome, CliError> {
    let rank = RankP::new(args.p)?;
    let conj = rank.conjugate();
    let rows: Vec<PhiRow> = args
        .x
        .0
        .iter()
        .map(|&x| {
            let y = phi_eval(&rank, x);
            Ok(PhiRow {
                x,
                phi_p: y,
                phi_q: phi_eval(&conj, x),
                inverse_round_trip: phi_inverse(&rank, y)?,
            })
        })
        .collect::<Result<_, Error>>()?;
    let body = match args.output.format {
        Format::Json => to_json(&PhiReport {
            version: crate::VERSION,
            p: rank.p(),
            q: rank.q(),
            rows,
        }),
        Format::Csv => {
            let mut s = String::from("x,phi_p,phi_q,inverse_round_trip\n");
            for r in rows {
                s.push_str(&[fmt_f64(r.x), fmt_f64(r.phi_p), fmt_f64(r.phi_q), fmt_f64(r.inverse_round_trip)].join(","));
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome { body, passed: true })
}

fn cmd_bound(args: &BoundArgs) -> Result<TailReport, CliError> {
    let rank = RankP::new(args.p)?;
    let schedule = IncrementSchedule::new(args.schedule.0.clone())?;
    let grid = resolve_grid(&args.grid, schedule.d())?;
    let (gamma, combined) = azuma_norms(&schedule, args.d0, rank)?;
    let rows = compare_bounds(&grid, &schedule, args.d0, rank)?;
    let epsilon_p = if rank.p() < 2.0 {
        Some(crossover_epsilon(rank, schedule.c(), schedule.d())?.epsilon_p)
    } else {
        None
    };
    Ok(TailReport {
        version: crate::VERSION.to_string(),
        config: serde_json::json!({
            "command": "bound",
            "p": args.p,
            "schedule": args.schedule,
            "d0": args.d0,
            "grid": args.grid,
            "eps_grid": grid,
            "format": args.output.format,
        }),
        p: rank.p(),
        q: rank.q(),
        r: rank.r(),
        schedule: schedule.steps().to_vec(),
        d0: args.d0,
        d0_provenance: D0Provenance::Declared,
        gamma_r: gamma.value,
        combined_norm: combined.value,
        epsilon_p,
        rows,
        seed: None,
        n_paths: None,
        delta: None,
        duration_s: 0.0,
    })
}

#[derive(Serialize)]
struct CrossoverReport {
    version: &'static str,
    config: serde_json::Value,
    p: f64,
    q: f64,
    d: f64,
    #[serde(flatten)]
    result: CrossoverResult,
    duration_s: f64,
}

fn cmd_crossover(args: &CrossoverArgs, started: Instant) -> Result<Outcome, CliError> {
    let rank = RankP::new(args.p)?;
    let (c, d) = match (&args.schedule, args.c, args.d) {
        (Some(List(steps)), _, _) => {
            let s = IncrementSchedule::new(steps.clone())?;
            (s.c(), s.d())
        }
        (None, Some(c), Some(d)) => (c, d),
        _ => return Err(CliError::Usage("give either --schedule or both --c and --d".into())),
    };
    let result = crossover_epsilon(rank, c, d)?;
    let report = CrossoverReport {
        version: crate::VERSION,
        config: serde_json::json!({
            "command": "crossover",
            "p": args.p,
            "schedule": args.schedule,
            "c": c,
            "d": d,
        }),
        p: rank.p(),
        q: rank.q(),
        d,
        result,
        duration_s: started.elapsed().as_secs_f64(),
    };
    let body = match args.output.format {
        Format::Json => to_json(&report),
        Format::Csv => format!(
            "p,q,c,d,epsilon_p,gamma_p,bracket_lo,bracket_hi,residual\n{}\n",
            [rank.p(), rank.q(), c, d, result.epsilon_p, result.gamma_p, result.bracket.0, result.bracket.1, result.residual]
                .map(fmt_f64)
                .join(",")
        ),
    };
    Ok(Outcome { body, passed: true })
}

#[derive(Serialize)]
struct EstimateReport {
    version: &'static str,
    config: serde_json::Value,
    p: f64,
    n: usize,
    tau_hat: f64,
    argmax_lambda: f64,
    center_shift: f64,
    tail_criterion: Option<TailCriterionReport>,
    cgf_curve: Vec<(f64, f64)>,
    duration_s: f64,
}

/// Parse whitespace-separated decimal numbers.
pub fn parse_numbers(text: &str) -> Result<Vec<f64>, CliError> {
    text.split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|e| CliError::Usage(format!("bad number {t:?} in input: {e}"))))
        .collect()
}

fn cmd_estimate(args: &EstimateArgs, started: Instant) -> Result<Outcome, CliError> {
    let rank = RankP::new(args.p)?;
    let samples = match args.dist {
        Some(dist) => {
            let q = args.q.ok_or_else(|| CliError::Usage("--dist needs --q".into()))?;
            let spec = match dist {
                DistArg::DoubleWeibull => DistributionSpec::DoubleWeibull { q },
                DistArg::HalfnormalPower => DistributionSpec::HalfnormalPower { q },
            };
            sample(spec, args.n, args.seed)?
        }
        None => {
            let text = match &args.input {
                Some(path) => fs::read_to_string(path)?,
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            SampleSet::new(parse_numbers(&text)?)?
        }
    };
    let est = estimate_norm(&samples, rank, &LambdaGrid::default())?;
    let d_const = args.tail_d.unwrap_or(1.1 * est.tau_hat);
    let tail = if d_const > 0.0 {
        let top = samples.centered().max_abs();
        let eps: Vec<f64> = (1..=12).map(|k| top * k as f64 / 12.0).collect();
        if top > 0.0 {
            Some(tail_criterion_check(&samples, rank, args.tail_c, d_const, &eps, args.delta)?)
        } else {
            None
        }
    } else {
        None
    };
    let passed = tail.as_ref().is_none_or(|t| t.pass);
    let report = EstimateReport {
        version: crate::VERSION,
        config: serde_json::json!({
            "command": "estimate",
            "p": args.p,
            "input": args.input,
            "dist": args.dist,
            "q": args.q,
            "n": args.dist.map(|_| args.n),
            "seed": args.dist.map(|_| args.seed),
            "tail_c": args.tail_c,
            "tail_d": d_const,
            "delta": args.delta,
        }),
        p: rank.p(),
        n: samples.len(),
        tau_hat: est.tau_hat,
        argmax_lambda: est.argmax_lambda,
        center_shift: est.center_shift,
        tail_criterion: tail,
        cgf_curve: est.cgf_curve,
        duration_s: started.elapsed().as_secs_f64(),
    };
    let body = match args.output.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("lambda,psi\n");
            for (l, psi) in &report.cgf_curve {
                s.push_str(&format!("{},{}\n", fmt_f64(*l), fmt_f64(*psi)));
            }
            s
        }
    };
    Ok(Outcome { body, passed })
}

/// Build the martingale spec for `validate` from a preset and overrides.
pub fn resolve_spec(args: &ValidateArgs) -> Result<MartingaleSpec, CliError> {
    let rank = RankP::new(args.p)?;
    let base = args.preset.map(|preset| preset.spec(rank));
    let schedule = match (&args.schedule, &base) {
        (Some(List(steps)), _) => IncrementSchedule::new(steps.clone())?,
        (None, Some(b)) => b.schedule.clone(),
        (None, None) => return Err(CliError::Usage("give --preset or --schedule".into())),
    };
    let law = args
        .law
        .map(IncrementLaw::from)
        .or(base.as_ref().map(|b| b.law))
        .unwrap_or(IncrementLaw::UniformSigned);
    let start = args
        .start
        .or(base.as_ref().map(|b| b.start))
        .unwrap_or(DistributionSpec::PointMass { x: 0.0 });
    let mut spec = MartingaleSpec::new(schedule, law, start, rank)?;
    if let Some(d0) = args.d0 {
        spec = spec.with_d0(d0);
    }
    Ok(spec)
}

fn cmd_validate(args: &ValidateArgs) -> Result<TailReport, CliError> {
    let spec = resolve_spec(args)?;
    let grid = resolve_grid(&args.grid, spec.schedule.d())?;
    let mut report = validate_theorem(&spec, &grid, args.n_paths, args.delta, args.seed)?;
    report.config = serde_json::json!({
        "command": "validate",
        "preset": args.preset,
        "p": args.p,
        "spec": spec,
        "grid": args.grid,
        "eps_grid": grid,
        "n_paths": args.n_paths,
        "delta": args.delta,
        "seed": args.seed,
        "format": args.output.format,
    });
    Ok(report)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<Outcome, CliError> {
    let mut body = String::new();
    match (args.dist, args.preset) {
        (Some(dist), None) => {
            let q = args.q.ok_or_else(|| CliError::Usage("--dist needs --q".into()))?;
            let spec = match dist {
                DistArg::DoubleWeibull => DistributionSpec::DoubleWeibull { q },
                DistArg::HalfnormalPower => DistributionSpec::HalfnormalPower { q },
            };
            for v in sample(spec, args.n, args.seed)?.values() {
                body.push_str(&fmt_f64(*v));
                body.push('\n');
            }
        }
        (None, Some(preset)) => {
            let spec = preset.spec(RankP::new(args.p)?);
            for path in generate_paths(&spec, args.n, args.seed)? {
                body.push_str(&format!("{} {}\n", fmt_f64(path.xi0), fmt_f64(path.xin)));
            }
        }
        _ => return Err(CliError::Usage("give exactly one of --dist or --preset".into())),
    }
    Ok(Outcome { body, passed: true })
}

fn tail_outcome(mut report: TailReport, format: Format, started: Instant) -> Outcome {
    report.duration_s = started.elapsed().as_secs_f64();
    let passed = report.all_pass();
    let body = match format {
        Format::Json => to_json(&report),
        Format::Csv => report.to_csv(),
    };
    Outcome { body, passed }
}

fn execute(cli: &Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    let started = Instant::now();
    Ok(match &cli.command {
        Command::Phi(a) => (cmd_phi(a)?, a.output.out.clone()),
        Command::Bound(a) => (tail_outcome(cmd_bound(a)?, a.output.format, started), a.output.out.clone()),
        Command::Crossover(a) => (cmd_crossover(a, started)?, a.output.out.clone()),
        Command::Estimate(a) => (cmd_estimate(a, started)?, a.output.out.clone()),
        Command::Validate(a) => (tail_outcome(cmd_validate(a)?, a.output.format, started), a.output.out.clone()),
        Command::Simulate(a) => (cmd_simulate(a)?, a.out.clone()),
    })
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let (outcome, out) = match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?
            .install(|| execute(cli))?,
        None => execute(cli)?,
    };
    match out {
        Some(path) => fs::write(path, outcome.body)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(outcome.body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(outcome.passed)
}

/// Parse `args`, run the command and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VIOLATION,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
