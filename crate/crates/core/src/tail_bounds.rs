//! Tail-probability bounds built on the `τ_{φ_p}` norm.
//!
//! For `ξ` with `τ_{φ_p}(ξ) ≤ τ`, `P(|ξ| ≥ ε) ≤ 2 exp(−φ_q(ε/τ))`. Applied to
//! a martingale with increment bounds `d_i` and starting norm `d0` this yields
//! the rank-`p` Azuma inequality; at `p = 2`, `d0 = 0` it collapses to the
//! classic Hoeffding–Azuma bound `2 exp(−ε²/(2Σd_i²))`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norm_bounds::{combined_norm, gamma_r, BoundedSupport, IncrementSchedule, NormBound};
use crate::orlicz::{phi_eval, phi_from_square, RankP};
use crate::report::TailRow;

/// A single evaluation of the generic tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailQuery {
    pub epsilon: f64,
    pub rank: RankP,
    pub norm: NormBound,
}

/// Solution of `φ_q(ε/γ_p) = ε²/(2c²)` on `ε > γ_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverResult {
    pub epsilon_p: f64,
    pub gamma_p: f64,
    pub c: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::domain(format!("epsilon must be nonnegative, got {epsilon}")));
    }
    Ok(())
}

/// `2 exp(−φ_q(ε/τ))`. A zero norm describes the point mass at 0.
pub fn generic_tail(query: &TailQuery) -> Result<f64> {
    check_epsilon(query.epsilon)?;
    let tau = query.norm.value;
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::domain(format!("norm must be nonnegative, got {tau}")));
    }
    if tau == 0.0 {
        return Ok(if query.epsilon > 0.0 { 0.0 } else { 2.0 });
    }
    let conj = query.rank.conjugate();
    Ok(2.0 * (-phi_eval(&conj, query.epsilon / tau)).exp())
}

/// Same estimate with the norm supplied squared.
fn tail_from_scale_sq(epsilon: f64, tau_sq: f64, q: f64) -> f64 {
    if tau_sq == 0.0 {
        return if epsilon > 0.0 { 0.0 } else { 2.0 };
    }
    2.0 * (-phi_from_square(q, epsilon * epsilon / tau_sq)).exp()
}

/// `γ_r` for the schedule and the combined norm bound for `ξ_n`.
pub fn azuma_norms(schedule: &IncrementSchedule, d0: f64, rank: RankP) -> Result<(NormBound, NormBound)> {
    let gamma = gamma_r(schedule.c(), schedule.d(), rank)?;
    let combined = combined_norm(gamma, d0, rank)?;
    Ok((gamma, combined))
}

/// Rank-`p` Azuma bound on `P(|ξ_n| ≥ ε)` for a martingale with increment
/// bounds `schedule` and `τ_{φ_p}(ξ_0) ≤ d0`.
pub fn azuma_rank_p_tail(epsilon: f64, schedule: &IncrementSchedule, d0: f64, rank: RankP) -> Result<f64> {
    check_epsilon(epsilon)?;
    let (_, combined) = azuma_norms(schedule, d0, rank)?;
    if rank.r() == 2.0 {
        // γ_2 = c exactly, so the squared norm is Σd_i² + d0²; using it
        // directly avoids a square root round trip.
        return Ok(tail_from_scale_sq(epsilon, schedule.sum_sq() + d0 * d0, rank.q()));
    }
    generic_tail(&TailQuery {
        epsilon,
        rank,
        norm: combined,
    })
}

/// Classic Hoeffding–Azuma bound `2 exp(−ε²/(2Σd_i²))`.
pub fn classic_azuma_tail(epsilon: f64, schedule: &IncrementSchedule) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok(2.0 * (-(epsilon * epsilon) / (2.0 * schedule.sum_sq())).exp())
}

/// Hoeffding's inequality for a sum of independent centered bounded
/// variables: `2 exp(−2ε²/Σ(b_i − a_i)²)`.
pub fn hoeffding_sum_tail(epsilon: f64, intervals: &[BoundedSupport]) -> Result<f64> {
    check_epsilon(epsilon)?;
    if intervals.is_empty() {
        return Err(Error::domain("hoeffding_sum_tail needs at least one interval"));
    }
    let width_sq: f64 = intervals.iter().map(|s| (s.b() - s.a()).powi(2)).sum();
    Ok(2.0 * (-2.0 * epsilon * epsilon / width_sq).exp())
}

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{lo}, {hi}]: f = {f_lo}, {f_hi}"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::RootFinding(format!("no convergence after {max_iter} iterations")))
}

/// Difference between the rank-`p` and the classic tail exponents,
/// `φ_q(ε/γ_p) − ε²/(2c²)`; the rank-`p` bound is sharper where it is positive.
pub fn crossover_gap(epsilon: f64, gamma_p: f64, c: f64, rank: RankP) -> f64 {
    phi_eval(&rank.conjugate(), epsilon / gamma_p) - epsilon * epsilon / (2.0 * c * c)
}

/// Threshold above which the rank-`p` Azuma bound (with `d0 = 0`) beats the
/// classic one. Only defined for `1 < p < 2`.
pub fn crossover_epsilon(rank: RankP, c: f64, d: f64) -> Result<CrossoverResult> {
    if rank.p() >= 2.0 {
        return Err(Error::domain(format!(
            "crossover requires p < 2 (got {}); the bounds coincide otherwise",
            rank.p()
        )));
    }
    let gamma_p = gamma_r(c, d, rank)?.value;
    let g = |eps: f64| crossover_gap(eps, gamma_p, c, rank);

    let lo = gamma_p * (1.0 + 1e-9);
    let mut hi = 2.0 * gamma_p;
    while g(hi) <= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::RootFinding("could not bracket the crossover".into()));
        }
    }
    let epsilon_p = bisect(g, lo, hi, 1e-12 * hi.max(1.0), 400)?;
    Ok(CrossoverResult {
        epsilon_p,
        gamma_p,
        c,
        bracket: (lo, hi),
        residual: g(epsilon_p),
    })
}

/// `φ_p(aλ) + φ_p(bλ) − φ_p((a^r + b^r)^{1/r} λ)`, nonpositive for
/// `a, b ≥ 0`. This is the step that merges the increment and starting-value
/// norms into one.
pub fn superadditivity_gap(rank: RankP, a: f64, b: f64, lambda: f64) -> f64 {
    let p = rank.p();
    if rank.r() == 2.0 {
        // merge the squares directly so the quadratic case cancels exactly
        let (a2, b2) = ((a * lambda).powi(2), (b * lambda).powi(2));
        return phi_from_square(p, a2) + phi_from_square(p, b2) - phi_from_square(p, a2 + b2);
    }
    let merged = (a.powf(p) + b.powf(p)).powf(1.0 / p);
    phi_eval(&rank, a * lambda) + phi_eval(&rank, b * lambda) - phi_eval(&rank, merged * lambda)
}

/// Check that `grid` is nonempty, nonnegative and ascending.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain("epsilon grid is empty"));
    }
    if grid.iter().any(|e| e.is_nan() || *e < 0.0) {
        return Err(Error::domain("epsilon grid must be nonnegative"));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("epsilon grid must be sorted ascending"));
    }
    Ok(())
}

/// Both Azuma bounds side by side on a grid of thresholds.
pub fn compare_bounds(grid: &[f64], schedule: &IncrementSchedule, d0: f64, rank: RankP) -> Result<Vec<TailRow>> {
    check_grid(grid)?;
    grid.iter()
        .map(|&eps| {
            let rank_p = azuma_rank_p_tail(eps, schedule, d0, rank)?;
            let classic = classic_azuma_tail(eps, schedule)?;
            Ok(TailRow::bounds(eps, rank_p, classic))
        })
        .collect()
}
