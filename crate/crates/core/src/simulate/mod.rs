//! Samplers, bounded-increment martingale generators and the Monte Carlo
//! harness that checks tail bounds against simulated frequencies.
//!
//! All randomness comes from [`rng::StreamKey`]: sample `i` (or path `i`) of a
//! run with seed `s` reads stream `(s, i)`, and step `k` of a path reads
//! counters `4k..4k+3` of that stream. Outputs are therefore identical for any
//! number of worker threads.

pub mod normal;
pub mod rng;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::estimator::{estimate_norm, frequency_slack, LambdaGrid, SampleSet, SeedProvenance};
use crate::norm_bounds::{gamma_for_support, gamma_r, BoundedSupport, IncrementSchedule};
use crate::orlicz::RankP;
use crate::report::{D0Provenance, TailReport};
use crate::tail_bounds::{azuma_norms, check_grid, compare_bounds, crossover_epsilon};

use self::normal::inverse_normal_cdf;
use self::rng::{derive_seed, StreamKey};

/// Name recorded in sample provenance.
pub const GENERATOR: &str = "splitmix64-counter";

/// Counters reserved per path step.
const LANES: u64 = 4;

/// Safety factor applied to empirically estimated starting norms.
pub const EMPIRICAL_D0_FACTOR: f64 = 1.1;

const PILOT_TAG: u64 = 0x0050_494c_4f54; // "PILOT"

/// Distributions for i.i.d. samples and martingale starting values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    /// Density `½|x|^{q−1} exp(−|x|^q/q)`.
    DoubleWeibull { q: f64 },
    /// `|Z|^{2/q} − E|Z|^{2/q}` for standard normal `Z`.
    HalfnormalPower { q: f64 },
    UniformBounded { a: f64, b: f64 },
    RademacherScaled { d: f64 },
    PointMass { x: f64 },
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::DoubleWeibull { q } | Self::HalfnormalPower { q } => {
                if !(q.is_finite() && q > 1.0) {
                    return Err(Error::domain(format!("shape q must exceed 1, got {q}")));
                }
            }
            Self::UniformBounded { a, b } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(Error::domain(format!("uniform bounds need a < b, got [{a}, {b}]")));
                }
            }
            Self::RademacherScaled { d } => {
                if !(d.is_finite() && d > 0.0) {
                    return Err(Error::domain(format!("rademacher scale must be positive, got {d}")));
                }
            }
            Self::PointMass { x } => {
                if !x.is_finite() {
                    return Err(Error::domain("point mass location must be finite"));
                }
            }
        }
        Ok(())
    }

    /// One draw using counters `base` and `base + 1` of `key`.
    pub fn draw(&self, key: &StreamKey, base: u64) -> f64 {
        match *self {
            Self::DoubleWeibull { q } => {
                let magnitude = (-q * key.uniform(base).ln()).powf(1.0 / q);
                if key.uniform(base + 1) < 0.5 {
                    -magnitude
                } else {
                    magnitude
                }
            }
            Self::HalfnormalPower { q } => {
                let z = inverse_normal_cdf(key.uniform(base));
                z.abs().powf(2.0 / q) - halfnormal_power_mean(q)
            }
            Self::UniformBounded { a, b } => a + (b - a) * key.uniform(base),
            Self::RademacherScaled { d } => {
                if key.uniform(base) < 0.5 {
                    -d
                } else {
                    d
                }
            }
            Self::PointMass { x } => x,
        }
    }
}

/// `E|Z|^{2/q}` for standard normal `Z`: `2^{a/2} Γ((a+1)/2) / √π` at `a = 2/q`.
pub fn halfnormal_power_mean(q: f64) -> f64 {
    let a = 2.0 / q;
    2f64.powf(0.5 * a) * gamma(0.5 * (a + 1.0)) / std::f64::consts::PI.sqrt()
}

/// `n` i.i.d. draws from `dist`.
pub fn sample(dist: DistributionSpec, n: usize, seed: u64) -> Result<SampleSet> {
    dist.validate()?;
    if n == 0 {
        return Err(Error::domain("sample size must be positive"));
    }
    let values: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| dist.draw(&StreamKey::new(seed, i), 0))
        .collect();
    Ok(SampleSet::new(values)?.with_provenance(SeedProvenance {
        generator: GENERATOR.to_string(),
        seed,
    }))
}

pub fn sample_double_weibull(q: f64, n: usize, seed: u64) -> Result<SampleSet> {
    sample(DistributionSpec::DoubleWeibull { q }, n, seed)
}

pub fn sample_halfnormal_power(q: f64, n: usize, seed: u64) -> Result<SampleSet> {
    sample(DistributionSpec::HalfnormalPower { q }, n, seed)
}

/// How each martingale increment is drawn given its bound `d_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IncrementLaw {
    /// Uniform on `[−d_k, d_k]`.
    UniformSigned,
    /// `±d_k` with equal probability.
    Rademacher,
    /// `d_k · R_k · B_k`: independent sign `R_k` times a multiplier in
    /// `[0, 1]` that depends on the path so far.
    AdaptiveDependent,
}

/// Default past-measurable multiplier for [`IncrementLaw::AdaptiveDependent`].
pub fn sine_multiplier(_step: usize, previous: f64) -> f64 {
    previous.sin().abs()
}

/// A martingale experiment: increment bounds and law, start distribution,
/// rank, and optionally a declared bound on the start's norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MartingaleSpec {
    pub schedule: IncrementSchedule,
    pub law: IncrementLaw,
    pub start: DistributionSpec,
    pub rank: RankP,
    pub d0: Option<f64>,
}

impl MartingaleSpec {
    pub fn new(schedule: IncrementSchedule, law: IncrementLaw, start: DistributionSpec, rank: RankP) -> Result<Self> {
        start.validate()?;
        Ok(Self {
            schedule,
            law,
            start,
            rank,
            d0: None,
        })
    }

    pub fn with_d0(mut self, d0: f64) -> Self {
        self.d0 = Some(d0);
        self
    }
}

/// Named experiment setups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Zero start, `±1` increments.
    ClassicAzuma,
    /// Zero start, uniform increments on `[−1, 1]`.
    ZeroUniform,
    /// Uniform `[−1, 1]` start, uniform increments.
    BoundedUniform,
    /// Uniform `[−1, 1]` start, path-dependent increments.
    BoundedAdaptive,
    /// Double Weibull start with shape `q` conjugate to the rank, uniform
    /// increments; the start norm is estimated.
    WeibullUniform,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::ClassicAzuma,
        Preset::ZeroUniform,
        Preset::BoundedUniform,
        Preset::BoundedAdaptive,
        Preset::WeibullUniform,
    ];

    pub const STEPS: usize = 20;

    pub fn name(&self) -> &'static str {
        match self {
            Preset::ClassicAzuma => "classic-azuma",
            Preset::ZeroUniform => "zero-uniform",
            Preset::BoundedUniform => "bounded-uniform",
            Preset::BoundedAdaptive => "bounded-adaptive",
            Preset::WeibullUniform => "weibull-uniform",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn spec(&self, rank: RankP) -> MartingaleSpec {
        let schedule = IncrementSchedule::uniform(Self::STEPS, 1.0).expect("preset schedule is valid");
        let unit = DistributionSpec::UniformBounded { a: -1.0, b: 1.0 };
        let zero = DistributionSpec::PointMass { x: 0.0 };
        let (law, start) = match self {
            Preset::ClassicAzuma => (IncrementLaw::Rademacher, zero),
            Preset::ZeroUniform => (IncrementLaw::UniformSigned, zero),
            Preset::BoundedUniform => (IncrementLaw::UniformSigned, unit),
            Preset::BoundedAdaptive => (IncrementLaw::AdaptiveDependent, unit),
            Preset::WeibullUniform => (IncrementLaw::UniformSigned, DistributionSpec::DoubleWeibull { q: rank.q() }),
        };
        MartingaleSpec::new(schedule, law, start, rank).expect("preset start is valid")
    }
}

/// Start and end of one simulated trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplePath {
    pub xi0: f64,
    pub xin: f64,
    pub n: usize,
    pub seed: u64,
    pub index: u64,
}

fn run_path<M>(spec: &MartingaleSpec, key: &StreamKey, multiplier: &M, mut record: Option<&mut Vec<f64>>) -> (f64, f64)
where
    M: Fn(usize, f64) -> f64 + ?Sized,
{
    let xi0 = spec.start.draw(key, 0);
    let mut xi = xi0;
    if let Some(rec) = record.as_deref_mut() {
        rec.push(xi);
    }
    for (k, &d) in spec.schedule.steps().iter().enumerate() {
        let base = (k as u64 + 1) * LANES;
        let step = match spec.law {
            IncrementLaw::UniformSigned => d * (2.0 * key.uniform(base) - 1.0),
            IncrementLaw::Rademacher => {
                if key.uniform(base) < 0.5 {
                    -d
                } else {
                    d
                }
            }
            IncrementLaw::AdaptiveDependent => {
                let sign = if key.uniform(base) < 0.5 { -1.0 } else { 1.0 };
                d * sign * multiplier(k + 1, xi).clamp(0.0, 1.0)
            }
        };
        xi += step;
        if let Some(rec) = record.as_deref_mut() {
            rec.push(xi);
        }
    }
    (xi0, xi)
}

/// `n_paths` independent trajectories of `spec`.
pub fn generate_paths(spec: &MartingaleSpec, n_paths: usize, seed: u64) -> Result<Vec<SamplePath>> {
    generate_paths_with(spec, n_paths, seed, &sine_multiplier)
}

/// As [`generate_paths`], with a caller-supplied multiplier for the
/// path-dependent law. The multiplier sees the step number (1-based) and the
/// current value, and is clamped to `[0, 1]`.
pub fn generate_paths_with<M>(spec: &MartingaleSpec, n_paths: usize, seed: u64, multiplier: &M) -> Result<Vec<SamplePath>>
where
    M: Fn(usize, f64) -> f64 + Sync + ?Sized,
{
    spec.start.validate()?;
    if n_paths == 0 {
        return Err(Error::domain("path count must be positive"));
    }
    let n = spec.schedule.len();
    Ok((0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let (xi0, xin) = run_path(spec, &StreamKey::new(seed, i), multiplier, None);
            SamplePath { xi0, xin, n, seed, index: i }
        })
        .collect())
}

/// Full trajectories `ξ_0, ..., ξ_n`, one vector per path.
pub fn generate_trajectories(spec: &MartingaleSpec, n_paths: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    spec.start.validate()?;
    if n_paths == 0 {
        return Err(Error::domain("path count must be positive"));
    }
    let n = spec.schedule.len();
    Ok((0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rec = Vec::with_capacity(n + 1);
            run_path(spec, &StreamKey::new(seed, i), &sine_multiplier, Some(&mut rec));
            rec
        })
        .collect())
}

/// Per-step martingale diagnostic: the increment should have mean zero and
/// the same mean whichever side of zero the previous value lies on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepDiagnostic {
    pub step: usize,
    pub mean: f64,
    pub mean_se: f64,
    /// Mean increment after a positive value minus the mean after a negative
    /// one; absent when either side has fewer than two paths.
    pub slope: Option<f64>,
    /// Welch standard error of `slope`.
    pub slope_se: Option<f64>,
    pub z_critical: f64,
    pub pass: bool,
}

/// Simulate `n_paths` trajectories and run [`step_diagnostics`] on them.
pub fn conditional_mean_diagnostic(spec: &MartingaleSpec, n_paths: usize, seed: u64, alpha: f64) -> Result<Vec<StepDiagnostic>> {
    if n_paths < 3 {
        return Err(Error::domain("diagnostic needs at least 3 paths"));
    }
    step_diagnostics(&generate_trajectories(spec, n_paths, seed)?, alpha)
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (m, v.iter().map(|y| (y - m).powi(2)).sum::<f64>() / (n - 1.0))
}

/// Conditional-mean checks on recorded trajectories at family-wise level
/// `alpha` (Bonferroni over steps and the two statistics). Paths sitting
/// exactly at zero enter the mean test only.
pub fn step_diagnostics(paths: &[Vec<f64>], alpha: f64) -> Result<Vec<StepDiagnostic>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if paths.len() < 3 {
        return Err(Error::domain("diagnostic needs at least 3 paths"));
    }
    let len = paths[0].len();
    if len < 2 || paths.iter().any(|p| p.len() != len) {
        return Err(Error::domain("trajectories must share a length of at least 2"));
    }
    let steps = len - 1;
    let z = inverse_normal_cdf(1.0 - alpha / (4.0 * steps as f64));
    let nf = paths.len() as f64;
    Ok((1..=steps)
        .map(|k| {
            let ys: Vec<f64> = paths.iter().map(|p| p[k] - p[k - 1]).collect();
            let (mean_y, var_y) = mean_var(&ys);
            let mean_se = (var_y / nf).sqrt();
            let side = |pos: bool| -> Vec<f64> {
                paths
                    .iter()
                    .zip(&ys)
                    .filter(|(p, _)| if pos { p[k - 1] > 0.0 } else { p[k - 1] < 0.0 })
                    .map(|(_, &y)| y)
                    .collect()
            };
            let (up, down) = (side(true), side(false));
            let (slope, slope_se) = if up.len() >= 2 && down.len() >= 2 {
                let (mu, vu) = mean_var(&up);
                let (md, vd) = mean_var(&down);
                (Some(mu - md), Some((vu / up.len() as f64 + vd / down.len() as f64).sqrt()))
            } else {
                (None, None)
            };
            let within = |v: f64, se: f64| v.abs() <= z * se || (se == 0.0 && v == 0.0);
            let pass = within(mean_y, mean_se)
                && match (slope, slope_se) {
                    (Some(b), Some(se)) => within(b, se),
                    _ => true,
                };
            StepDiagnostic {
                step: k,
                mean: mean_y,
                mean_se,
                slope,
                slope_se,
                z_critical: z,
                pass,
            }
        })
        .collect())
}

/// Empirical `P(|ξ_n| ≥ ε)` with its one-sided slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloResult {
    pub epsilon: f64,
    pub frequency: f64,
    pub exceedances: usize,
    pub paths: usize,
    pub ci_slack: f64,
    pub delta: f64,
}

pub fn monte_carlo_tail(paths: &[SamplePath], epsilon: f64, delta: f64) -> Result<MonteCarloResult> {
    if paths.is_empty() {
        return Err(Error::domain("no paths to evaluate"));
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::domain(format!("epsilon must be nonnegative, got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    let exceedances = paths.iter().filter(|p| p.xin.abs() >= epsilon).count();
    Ok(MonteCarloResult {
        epsilon,
        frequency: exceedances as f64 / paths.len() as f64,
        exceedances,
        paths: paths.len(),
        ci_slack: frequency_slack(paths.len(), delta),
        delta,
    })
}

/// A bound on `τ_{φ_p}(ξ_0)` with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StartNorm {
    pub d0: f64,
    pub provenance: D0Provenance,
}

/// Norm bound for a start distribution: closed form for bounded centered
/// laws, otherwise an estimate from `pilot_n` draws times
/// [`EMPIRICAL_D0_FACTOR`]. Uncentered bounded starts are rejected.
pub fn derive_start_norm(start: DistributionSpec, rank: RankP, pilot_n: usize, seed: u64) -> Result<StartNorm> {
    start.validate()?;
    let exact = |d0| Ok(StartNorm { d0, provenance: D0Provenance::Exact });
    match start {
        DistributionSpec::PointMass { x } => {
            if x != 0.0 {
                return Err(Error::domain(format!("start point mass at {x} is not centered")));
            }
            exact(0.0)
        }
        DistributionSpec::UniformBounded { a, b } => {
            if a + b != 0.0 {
                return Err(Error::domain(format!("uniform start on [{a}, {b}] is not centered")));
            }
            exact(gamma_for_support(&BoundedSupport::new(a, b)?, rank).value)
        }
        DistributionSpec::RademacherScaled { d } => exact(gamma_r(d, d, rank)?.value),
        DistributionSpec::DoubleWeibull { .. } | DistributionSpec::HalfnormalPower { .. } => {
            let pilot = sample(start, pilot_n.max(1), derive_seed(seed, PILOT_TAG))?;
            let est = estimate_norm(&pilot, rank, &LambdaGrid::default())?;
            Ok(StartNorm {
                d0: EMPIRICAL_D0_FACTOR * est.tau_hat,
                provenance: D0Provenance::Empirical,
            })
        }
    }
}

/// The start norm actually used for a spec: the declared `d0` if present
/// (and, for closed-form starts, not below the derived value), otherwise the
/// derived one.
pub fn resolve_start_norm(spec: &MartingaleSpec, pilot_n: usize, seed: u64) -> Result<StartNorm> {
    let derived = derive_start_norm(spec.start, spec.rank, pilot_n, seed)?;
    match spec.d0 {
        None => Ok(derived),
        Some(d0) if d0.is_nan() || d0 < 0.0 => Err(Error::domain(format!("d0 must be nonnegative, got {d0}"))),
        Some(d0) if derived.provenance == D0Provenance::Exact && d0 < derived.d0 => Err(Error::domain(format!(
            "declared d0 = {d0} is below the start's norm bound {}",
            derived.d0
        ))),
        Some(d0) => Ok(StartNorm {
            d0,
            provenance: D0Provenance::Declared,
        }),
    }
}

/// `k·Σd_i/count` for `k = 1..=count`.
pub fn default_eps_grid(schedule: &IncrementSchedule, count: usize) -> Vec<f64> {
    let top = schedule.d();
    (1..=count).map(|k| top * k as f64 / count as f64).collect()
}

/// Simulate `spec` and compare the rank-`p` Azuma bound with the empirical
/// tail frequency at every threshold of `eps_grid`.
pub fn validate_theorem(spec: &MartingaleSpec, eps_grid: &[f64], n_paths: usize, delta: f64, seed: u64) -> Result<TailReport> {
    let started = Instant::now();
    check_grid(eps_grid)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    let start_norm = resolve_start_norm(spec, n_paths, seed)?;
    let rank = spec.rank;
    let (gamma, combined) = azuma_norms(&spec.schedule, start_norm.d0, rank)?;
    let paths = generate_paths(spec, n_paths, seed)?;

    let mut magnitudes: Vec<f64> = paths.iter().map(|p| p.xin.abs()).collect();
    magnitudes.sort_by(f64::total_cmp);
    let slack = frequency_slack(n_paths, delta);
    let rows = compare_bounds(eps_grid, &spec.schedule, start_norm.d0, rank)?
        .into_iter()
        .map(|row| {
            let below = magnitudes.partition_point(|&m| m < row.eps);
            let frequency = (n_paths - below) as f64 / n_paths as f64;
            row.with_empirical(frequency, slack)
        })
        .collect();
    let epsilon_p = if rank.p() < 2.0 {
        Some(crossover_epsilon(rank, spec.schedule.c(), spec.schedule.d())?.epsilon_p)
    } else {
        None
    };
    Ok(TailReport {
        version: crate::VERSION.to_string(),
        config: serde_json::json!({
            "spec": spec,
            "eps_grid": eps_grid,
            "n_paths": n_paths,
            "delta": delta,
            "seed": seed,
        }),
        p: rank.p(),
        q: rank.q(),
        r: rank.r(),
        schedule: spec.schedule.steps().to_vec(),
        d0: start_norm.d0,
        d0_provenance: start_norm.provenance,
        gamma_r: gamma.value,
        combined_norm: combined.value,
        epsilon_p,
        rows,
        seed: Some(seed),
        n_paths: Some(n_paths),
        delta: Some(delta),
        duration_s: started.elapsed().as_secs_f64(),
    })
}
