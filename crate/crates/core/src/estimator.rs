//! Empirical cumulant generating functions and data-driven norm estimates.
//!
//! The norm admits the equivalent form
//! `τ_{φ_p}(ξ) = sup_{λ≠0} φ_p^{-1}(ψ_ξ(λ)) / |λ|`, which [`estimate_norm`]
//! evaluates on a finite grid of `λ` with the empirical CGF in place of `ψ_ξ`.
//! A grid supremum can only underestimate the true supremum.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norm_bounds::IncrementSchedule;
use crate::orlicz::{phi_eval, phi_inverse_raw, RankP};
use crate::simulate::rng::StreamKey;

/// Default confidence parameter for one-sided frequency slack.
pub const DEFAULT_DELTA: f64 = 1e-3;

/// Where a sample set came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeedProvenance {
    pub generator: String,
    pub seed: u64,
}

/// A batch of real observations.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
    centered: bool,
    shift: f64,
    min: f64,
    max: f64,
    provenance: Option<SeedProvenance>,
}

impl SampleSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("sample set is empty"));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite sample value {bad}")));
        }
        let (min, max) = min_max(&values);
        Ok(Self {
            values,
            centered: false,
            shift: 0.0,
            min,
            max,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, provenance: SeedProvenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    /// Total amount subtracted by [`SampleSet::centered`].
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn provenance(&self) -> Option<&SeedProvenance> {
        self.provenance.as_ref()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.min.abs().max(self.max.abs())
    }

    /// A copy with the sample mean subtracted. Two passes leave a residual
    /// mean at roundoff level.
    pub fn centered(&self) -> Self {
        if self.centered {
            return self.clone();
        }
        let mut values = self.values.clone();
        let mut shift = 0.0;
        for _ in 0..2 {
            let m = values.iter().sum::<f64>() / values.len() as f64;
            values.iter_mut().for_each(|v| *v -= m);
            shift += m;
        }
        let (min, max) = min_max(&values);
        Self {
            values,
            centered: true,
            shift,
            min,
            max,
            provenance: self.provenance.clone(),
        }
    }

    /// Every value multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let values: Vec<f64> = self.values.iter().map(|v| v * s).collect();
        let (min, max) = min_max(&values);
        Self {
            values,
            min,
            max,
            shift: self.shift * s,
            ..self.clone()
        }
    }
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Finite set of nonzero `λ` standing in for "all real `λ`".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaGrid {
    points: Vec<f64>,
    symmetric: bool,
}

impl LambdaGrid {
    pub fn new(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("lambda grid is empty"));
        }
        if points.iter().any(|l| !l.is_finite() || *l == 0.0) {
            return Err(Error::domain("lambda grid points must be finite and nonzero"));
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        let symmetric = points.iter().all(|l| points.binary_search_by(|x| x.total_cmp(&-l)).is_ok());
        Ok(Self { points, symmetric })
    }

    /// `±` each magnitude in `magnitudes`.
    pub fn symmetric(magnitudes: &[f64]) -> Result<Self> {
        let points = magnitudes.iter().flat_map(|&m| [m.abs(), -m.abs()]).collect();
        Self::new(points)
    }

    /// Symmetric grid with log-spaced magnitudes in `[lo, hi]`.
    pub fn log_spaced(lo: f64, hi: f64, per_decade: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && per_decade > 0) {
            return Err(Error::domain("log-spaced grid needs 0 < lo < hi and per_decade > 0"));
        }
        let decades = (hi / lo).log10();
        let steps = (decades * per_decade as f64).round().max(1.0) as usize;
        let mags: Vec<f64> = (0..=steps)
            .map(|k| lo * 10f64.powf(decades * k as f64 / steps as f64))
            .collect();
        Self::symmetric(&mags)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Same grid with every point multiplied by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.points.iter().map(|l| l * s).collect())
    }
}

impl Default for LambdaGrid {
    /// Magnitudes from 1e-3 to 1e1, 50 per decade, both signs. Large `λ` is
    /// left out because the empirical MGF there is driven by the sample
    /// extremes alone.
    fn default() -> Self {
        Self::log_spaced(1e-3, 1e1, 50).expect("default grid parameters are valid")
    }
}

/// `ln((1/N) Σ exp(λ x_i))`, shifted by the largest exponent to avoid overflow.
pub fn empirical_cgf(samples: &SampleSet, lambda: f64) -> Result<f64> {
    if !lambda.is_finite() {
        return Err(Error::domain(format!("lambda must be finite, got {lambda}")));
    }
    Ok(cgf_of(samples.values(), samples.min, samples.max, lambda))
}

fn cgf_of(values: &[f64], min: f64, max: f64, lambda: f64) -> f64 {
    let top = if lambda >= 0.0 { lambda * max } else { lambda * min };
    let sum: f64 = values.iter().map(|&x| (lambda * x - top).exp()).sum();
    top + (sum / values.len() as f64).ln()
}

/// Grid estimate of `τ_{φ_p}` together with the CGF curve it was read from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub tau_hat: f64,
    pub argmax_lambda: f64,
    pub center_shift: f64,
    pub cgf_curve: Vec<(f64, f64)>,
}

/// `max_λ φ_p^{-1}(max(ψ̂(λ), 0)) / |λ|` over the grid. Uncentered samples
/// are centered first and the shift is recorded.
pub fn estimate_norm(samples: &SampleSet, rank: RankP, grid: &LambdaGrid) -> Result<NormEstimate> {
    let centered = samples.centered();
    let curve: Vec<(f64, f64)> = grid
        .points()
        .par_iter()
        .map(|&l| (l, cgf_of(centered.values(), centered.min, centered.max, l)))
        .collect();
    let (mut tau_hat, mut argmax_lambda) = (0.0, grid.points()[0]);
    for &(l, psi) in &curve {
        let c = phi_inverse_raw(rank.p(), psi.max(0.0)) / l.abs();
        if c > tau_hat {
            tau_hat = c;
            argmax_lambda = l;
        }
    }
    Ok(NormEstimate {
        tau_hat,
        argmax_lambda,
        center_shift: centered.shift(),
        cgf_curve: curve,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCriterionRow {
    pub eps: f64,
    pub frequency: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Empirical check of `P(|ξ| ≥ ε) ≤ C exp(−φ_q(ε/D))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCriterionReport {
    pub c_const: f64,
    pub d_const: f64,
    pub delta: f64,
    pub n: usize,
    pub center_shift: f64,
    pub rows: Vec<TailCriterionRow>,
    pub pass: bool,
}

/// One-sided slack `√(ln(1/δ)/(2N))` for an empirical frequency.
pub fn frequency_slack(n: usize, delta: f64) -> f64 {
    ((1.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

pub fn tail_criterion_check(
    samples: &SampleSet,
    rank: RankP,
    c_const: f64,
    d_const: f64,
    eps_grid: &[f64],
    delta: f64,
) -> Result<TailCriterionReport> {
    if !(c_const > 0.0 && c_const.is_finite()) || !(d_const > 0.0 && d_const.is_finite()) {
        return Err(Error::domain(format!(
            "tail criterion constants must be positive, got C = {c_const}, D = {d_const}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if eps_grid.is_empty() || eps_grid.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::domain("tail criterion grid must be nonempty and strictly positive"));
    }
    if eps_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("tail criterion grid must be ascending"));
    }
    let centered = samples.centered();
    let n = centered.len();
    let slack = frequency_slack(n, delta);
    let conj = rank.conjugate();
    let mut mags: Vec<f64> = centered.values().iter().map(|v| v.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let rows: Vec<TailCriterionRow> = eps_grid
        .iter()
        .map(|&eps| {
            let below = mags.partition_point(|&m| m < eps);
            let frequency = (n - below) as f64 / n as f64;
            let bound = c_const * (-phi_eval(&conj, eps / d_const)).exp();
            TailCriterionRow {
                eps,
                frequency,
                bound,
                slack,
                pass: frequency <= bound + slack,
            }
        })
        .collect();
    Ok(TailCriterionReport {
        c_const,
        d_const,
        delta,
        n,
        center_shift: centered.shift(),
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CgfDecompositionRow {
    pub lambda: f64,
    pub psi_n: f64,
    pub rhs: f64,
    /// `ψ̂_{ξ_n}(λ) − rhs`; positive values are violations.
    pub excess: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Empirical check of `ψ_{ξ_n}(λ) ≤ c²λ²/2 + ψ_{ξ_0}(λ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CgfDecompositionReport {
    pub c: f64,
    pub resamples: usize,
    pub quantile: f64,
    pub rows: Vec<CgfDecompositionRow>,
    pub pass: bool,
}

/// Bootstrap resample count and quantile used for the decomposition slack.
pub const BOOTSTRAP_RESAMPLES: usize = 200;
pub const BOOTSTRAP_QUANTILE: f64 = 0.995;

/// Compare the CGF of `ξ_n` against the bound built from the CGF of `ξ_0`.
///
/// Any observed excess must stay below the 99.5% quantile of the absolute
/// bootstrap deviation of the excess (paired resampling of trajectories).
pub fn cgf_decomposition_check(
    xi0: &[f64],
    xin: &[f64],
    schedule: &IncrementSchedule,
    grid: &LambdaGrid,
    resamples: usize,
    seed: u64,
) -> Result<CgfDecompositionReport> {
    if xi0.len() != xin.len() {
        return Err(Error::domain(format!(
            "paired samples differ in length: {} vs {}",
            xi0.len(),
            xin.len()
        )));
    }
    if resamples == 0 {
        return Err(Error::domain("bootstrap needs at least one resample"));
    }
    let start = SampleSet::new(xi0.to_vec())?;
    let end = SampleSet::new(xin.to_vec())?;
    let c_sq = schedule.sum_sq();
    let excess_of = |psi_n: f64, psi_0: f64, l: f64| psi_n - (0.5 * c_sq * l * l + psi_0);

    let observed: Vec<(f64, f64, f64)> = grid
        .points()
        .iter()
        .map(|&l| {
            let psi_n = cgf_of(end.values(), end.min, end.max, l);
            let psi_0 = cgf_of(start.values(), start.min, start.max, l);
            (l, psi_n, psi_0)
        })
        .collect();

    let n = xi0.len();
    let boot: Vec<Vec<f64>> = (0..resamples)
        .into_par_iter()
        .map(|b| {
            let key = StreamKey::new(seed, b as u64);
            let (mut r0, mut rn) = (Vec::with_capacity(n), Vec::with_capacity(n));
            for k in 0..n {
                let i = key.index(k as u64, n);
                r0.push(xi0[i]);
                rn.push(xin[i]);
            }
            let (lo0, hi0) = min_max(&r0);
            let (lon, hin) = min_max(&rn);
            grid.points()
                .iter()
                .map(|&l| excess_of(cgf_of(&rn, lon, hin, l), cgf_of(&r0, lo0, hi0, l), l))
                .collect()
        })
        .collect();

    let rows: Vec<CgfDecompositionRow> = observed
        .iter()
        .enumerate()
        .map(|(j, &(l, psi_n, psi_0))| {
            let excess = excess_of(psi_n, psi_0, l);
            let mut dev: Vec<f64> = boot.iter().map(|row| (row[j] - excess).abs()).collect();
            dev.sort_by(f64::total_cmp);
            let slack = quantile_sorted(&dev, BOOTSTRAP_QUANTILE);
            CgfDecompositionRow {
                lambda: l,
                psi_n,
                rhs: 0.5 * c_sq * l * l + psi_0,
                excess,
                slack,
                pass: excess <= slack,
            }
        })
        .collect();
    Ok(CgfDecompositionReport {
        c: schedule.c(),
        resamples,
        quantile: BOOTSTRAP_QUANTILE,
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}

/// Upper empirical quantile of an ascending slice.
fn quantile_sorted(sorted: &[f64], level: f64) -> f64 {
    let idx = ((level * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1;
    sorted[idx]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rank(p: f64) -> RankP {
        RankP::new(p).unwrap()
    }

    fn rademacher() -> SampleSet {
        SampleSet::new(vec![1.0, -1.0]).unwrap()
    }

    #[test]
    fn sample_set_validation() {
        assert!(SampleSet::new(vec![]).is_err());
        assert!(SampleSet::new(vec![1.0, f64::NAN]).is_err());
        let s = SampleSet::new(vec![1.0, 2.0, 3.0, 10.0]).unwrap().centered();
        assert!(s.is_centered());
        assert!(s.mean().abs() <= 1e-12 * s.max_abs());
        assert!((s.shift() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn grid_validation() {
        assert!(LambdaGrid::new(vec![]).is_err());
        assert!(LambdaGrid::new(vec![0.0, 1.0]).is_err());
        assert!(LambdaGrid::new(vec![1.0, f64::NAN]).is_err());
        assert!(LambdaGrid::new(vec![2.0, -2.0, 1.0, -1.0]).unwrap().is_symmetric());
        assert!(!LambdaGrid::new(vec![2.0, -2.0, 1.0]).unwrap().is_symmetric());
        let g = LambdaGrid::default();
        assert!(g.is_symmetric());
        assert_eq!(g.points().len(), 2 * 201);
        let min_abs = g.points().iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min);
        let max_abs = g.points().iter().map(|l| l.abs()).fold(0.0, f64::max);
        assert!((min_abs - 1e-3).abs() < 1e-15 && (max_abs - 10.0).abs() < 1e-12);
    }

    #[test]
    fn cgf_examples() {
        let zeros = SampleSet::new(vec![0.0; 17]).unwrap();
        for l in [-5.0, 0.3, 40.0] {
            assert_eq!(empirical_cgf(&zeros, l).unwrap(), 0.0);
        }
        let v = empirical_cgf(&rademacher(), 1.0).unwrap();
        assert!((v - 0.433_780_830_483_027_2).abs() < 1e-15);
        let one = SampleSet::new(vec![2.5]).unwrap();
        assert_eq!(empirical_cgf(&one, -3.0).unwrap(), -7.5);
        assert!(empirical_cgf(&one, f64::NAN).is_err());
        // no overflow far out
        let v = empirical_cgf(&rademacher(), 1000.0).unwrap();
        assert!((v - (1000.0 - 2f64.ln())).abs() < 1e-12);
        assert_eq!(empirical_cgf(&rademacher(), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn estimate_examples() {
        let zero = SampleSet::new(vec![0.0; 5]).unwrap();
        assert_eq!(estimate_norm(&zero, rank(2.0), &LambdaGrid::default()).unwrap().tau_hat, 0.0);

        let est2 = estimate_norm(&rademacher(), rank(2.0), &LambdaGrid::default()).unwrap();
        assert!((0.99..=1.0).contains(&est2.tau_hat), "{}", est2.tau_hat);
        assert!(est2.argmax_lambda.abs() < 0.01);
        let est15 = estimate_norm(&rademacher(), rank(1.5), &LambdaGrid::default()).unwrap();
        assert!(est15.tau_hat >= est2.tau_hat);
        assert!(estimate_norm(&rademacher(), rank(2.0), &LambdaGrid::default()).is_ok());
    }

    #[test]
    fn estimate_centers_and_records_shift() {
        let s = SampleSet::new(vec![4.0, 2.0]).unwrap();
        let est = estimate_norm(&s, rank(2.0), &LambdaGrid::default()).unwrap();
        assert_eq!(est.center_shift, 3.0);
        assert!((0.99..=1.0).contains(&est.tau_hat));
    }

    #[test]
    fn norm_definition_consistency() {
        let vals: Vec<f64> = (0..500).map(|i| ((i * 37 % 101) as f64 / 50.0 - 1.0).powi(3)).collect();
        let s = SampleSet::new(vals).unwrap().centered();
        let grid = LambdaGrid::default();
        for p in [1.2, 1.5, 2.0, 3.0] {
            let est = estimate_norm(&s, rank(p), &grid).unwrap();
            for &(l, psi) in &est.cgf_curve {
                assert!(psi <= phi_eval(&rank(p), est.tau_hat * l) + 1e-12, "p={p} l={l}");
            }
        }
    }

    #[test]
    fn grid_refinement_never_decreases() {
        let vals: Vec<f64> = (0..300).map(|i| ((i * 13 % 29) as f64 - 14.0) / 7.0).collect();
        let s = SampleSet::new(vals).unwrap();
        let coarse = LambdaGrid::log_spaced(1e-2, 5.0, 5).unwrap();
        let mut finer = coarse.points().to_vec();
        finer.extend(LambdaGrid::log_spaced(1e-2, 5.0, 17).unwrap().points());
        let fine = LambdaGrid::new(finer).unwrap();
        for p in [1.3, 2.0] {
            let a = estimate_norm(&s, rank(p), &coarse).unwrap().tau_hat;
            let b = estimate_norm(&s, rank(p), &fine).unwrap().tau_hat;
            assert!(b >= a);
        }
    }

    #[test]
    fn tail_criterion_examples() {
        let zero = SampleSet::new(vec![0.0; 10]).unwrap();
        let rep = tail_criterion_check(&zero, rank(1.5), 1.0, 0.5, &[0.1, 1.0, 3.0], DEFAULT_DELTA).unwrap();
        assert!(rep.pass);
        assert!(rep.rows.iter().all(|r| r.frequency == 0.0));
        assert!(tail_criterion_check(&zero, rank(1.5), 1.0, 0.5, &[0.0, 1.0], DEFAULT_DELTA).is_err());
        assert!(tail_criterion_check(&zero, rank(1.5), 0.0, 0.5, &[1.0], DEFAULT_DELTA).is_err());
        assert!(tail_criterion_check(&zero, rank(1.5), 1.0, -0.5, &[1.0], DEFAULT_DELTA).is_err());
    }

    #[test]
    fn slack_value() {
        assert!((frequency_slack(100_000, 1e-3) - 0.005_876_970_001_191_999).abs() < 1e-15);
    }

    #[test]
    fn decomposition_two_point() {
        // ξ_0 = 0, one step of exactly ±1: ψ_n = ln cosh λ ≤ λ²/2
        let xi0 = vec![0.0; 2];
        let xin = vec![1.0, -1.0];
        let s = IncrementSchedule::new(vec![1.0]).unwrap();
        let grid = LambdaGrid::symmetric(&[0.25, 0.5, 1.0, 2.0]).unwrap();
        let rep = cgf_decomposition_check(&xi0, &xin, &s, &grid, 50, 3).unwrap();
        assert!(rep.pass);
        for row in &rep.rows {
            assert!((row.psi_n - row.lambda.cosh().ln()).abs() < 1e-14);
            assert!(row.excess <= 0.0);
        }
        assert!(cgf_decomposition_check(&xi0, &xin[..1], &s, &grid, 50, 3).is_err());
    }

    proptest! {
        #[test]
        fn cgf_convex_and_zero_at_origin(vals in prop::collection::vec(-5.0f64..5.0, 1..60),
                                         l1 in -3.0f64..3.0, l2 in -3.0f64..3.0, t in 0.0f64..1.0) {
            let s = SampleSet::new(vals).unwrap();
            prop_assert_eq!(empirical_cgf(&s, 0.0).unwrap(), 0.0);
            let mid = empirical_cgf(&s, t * l1 + (1.0 - t) * l2).unwrap();
            let chord = t * empirical_cgf(&s, l1).unwrap() + (1.0 - t) * empirical_cgf(&s, l2).unwrap();
            prop_assert!(mid <= chord + 1e-10 * (1.0 + chord.abs()));
        }

        #[test]
        fn centered_cgf_nonnegative(vals in prop::collection::vec(-5.0f64..5.0, 2..60), l in -3.0f64..3.0) {
            let s = SampleSet::new(vals).unwrap().centered();
            prop_assert!(empirical_cgf(&s, l).unwrap() >= -1e-12);
        }

        #[test]
        fn rank_ordering(vals in prop::collection::vec(-4.0f64..4.0, 2..80), p1 in 1.05f64..3.0, dp in 0.0f64..2.0) {
            let s = SampleSet::new(vals).unwrap();
            let grid = LambdaGrid::log_spaced(1e-2, 10.0, 8).unwrap();
            let lo = estimate_norm(&s, rank(p1), &grid).unwrap().tau_hat;
            let hi = estimate_norm(&s, rank(p1 + dp), &grid).unwrap().tau_hat;
            prop_assert!(lo >= hi * (1.0 - 1e-14));
        }

        #[test]
        fn scale_equivariance(vals in prop::collection::vec(-4.0f64..4.0, 2..80), scale in 0.1f64..10.0, p in 1.05f64..3.0) {
            let s = SampleSet::new(vals).unwrap();
            let grid = LambdaGrid::log_spaced(1e-2, 10.0, 8).unwrap();
            let base = estimate_norm(&s, rank(p), &grid).unwrap().tau_hat;
            let scaled = estimate_norm(&s.scaled(scale), rank(p), &grid.scaled(1.0 / scale).unwrap()).unwrap().tau_hat;
            prop_assert!((scaled - scale * base).abs() <= 1e-12 * (scale * base).max(1e-300));
        }
    }
}
