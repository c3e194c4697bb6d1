//! The `φ_p` family of quadratic N-functions.
//!
//! `φ_p(x) = x²/2` for `|x| ≤ 1` and `|x|^p/p − 1/p + 1/2` otherwise. Both
//! branches agree in value and slope at `|x| = 1`, so `φ_p` is `C¹`, even and
//! convex. Its Young–Fenchel conjugate is `φ_q` with `1/p + 1/q = 1`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest admissible excess `p − 1`; keeps `q = p/(p−1)` finite.
pub const RANK_GUARD: f64 = 1e-9;

/// A validated rank `p > 1` with its Hölder conjugate `q` and `r = min{p, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankP {
    p: f64,
    q: f64,
    r: f64,
}

impl RankP {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 1.0 + RANK_GUARD {
            return Err(Error::InvalidRank(p));
        }
        let q = conjugate_exponent(p)?;
        Ok(Self { p, q, r: p.min(2.0) })
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }

    /// The rank of the conjugate function, `q`.
    pub fn conjugate(&self) -> Self {
        // q > 1 whenever p is finite and p > 1, and q's own conjugate is p.
        Self {
            p: self.q,
            q: self.p,
            r: self.q.min(2.0),
        }
    }

    #[inline]
    pub fn phi(&self, x: f64) -> f64 {
        phi_eval(self, x)
    }
}

/// Hölder conjugate `q = p/(p−1)`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::InvalidRank(p));
    }
    Ok(p / (p - 1.0))
}

/// `φ_p(x)`. Never fails; the rank carries the validation.
pub fn phi_eval(rank: &RankP, x: f64) -> f64 {
    phi_raw(rank.p, x)
}

#[inline]
pub(crate) fn phi_raw(p: f64, x: f64) -> f64 {
    let ax = x.abs();
    // φ_2 is x²/2 on the whole line; skip the pow branch to keep it exact
    if ax <= 1.0 || p == 2.0 {
        0.5 * ax * ax
    } else {
        ax.powf(p) / p - 1.0 / p + 0.5
    }
}

/// `φ_p` evaluated from the square of its argument, `x2 = x²`.
///
/// Used when a scale is naturally available squared (sums of squared
/// increments) so that no square root is taken and undone.
#[inline]
pub(crate) fn phi_from_square(p: f64, x2: f64) -> f64 {
    if x2 <= 1.0 || p == 2.0 {
        0.5 * x2
    } else {
        x2.powf(0.5 * p) / p - 1.0 / p + 0.5
    }
}

/// Derivative `φ_p'(x)`.
pub fn phi_derivative(rank: &RankP, x: f64) -> f64 {
    if x.abs() <= 1.0 {
        x
    } else {
        x.signum() * x.abs().powf(rank.p - 1.0)
    }
}

/// The nonnegative `x` with `φ_p(x) = y`.
pub fn phi_inverse(rank: &RankP, y: f64) -> Result<f64> {
    if y.is_nan() || y < 0.0 {
        return Err(Error::domain(format!("phi_inverse needs y >= 0, got {y}")));
    }
    Ok(phi_inverse_raw(rank.p, y))
}

#[inline]
pub(crate) fn phi_inverse_raw(p: f64, y: f64) -> f64 {
    if y <= 0.5 {
        (2.0 * y).sqrt()
    } else {
        (p * (y - 0.5 + 1.0 / p)).powf(1.0 / p)
    }
}

/// Controls for the numerical Legendre transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Initial half-width of the search bracket; doubled until it contains
    /// the maximiser.
    pub bracket: f64,
    /// Relative width at which golden-section refinement stops.
    pub tol: f64,
    /// Also run the bracketed search and keep the larger value.
    pub refine: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            bracket: 1.0,
            tol: 1e-12,
            refine: true,
        }
    }
}

/// `sup_x {xy − φ_p(x)}`.
///
/// The stationary point `φ_p'(x) = y` is used first; with `cfg.refine` a
/// bracketed golden-section search over the same objective is also run and
/// the larger of the two values returned.
pub fn legendre_numeric(rank: &RankP, y: f64, cfg: &SearchConfig) -> f64 {
    let objective = |x: f64| x * y - phi_eval(rank, x);
    let stationary = if y.abs() <= 1.0 {
        y
    } else {
        y.signum() * y.abs().powf(1.0 / (rank.p - 1.0))
    };
    let analytic = objective(stationary);
    if cfg.refine {
        analytic.max(legendre_by_search(rank, y, cfg))
    } else {
        analytic
    }
}

/// `sup_x {xy − φ_p(x)}` by pure bracketed search, without using the
/// derivative of `φ_p`. Serves as the oracle for the conjugate identity.
pub fn legendre_by_search(rank: &RankP, y: f64, cfg: &SearchConfig) -> f64 {
    let objective = |x: f64| x * y - phi_eval(rank, x);
    let mut width = cfg.bracket.max(f64::MIN_POSITIVE);
    // The objective is concave; once it drops from w/2 to w on both sides the
    // maximiser lies inside [-w, w].
    while (objective(width) >= objective(0.5 * width) || objective(-width) >= objective(-0.5 * width))
        && width < 1e300
    {
        width *= 2.0;
    }
    let x = golden_section_max(objective, -width, width, cfg.tol);
    objective(x)
}

/// Golden-section search for the maximiser of a unimodal function on `[lo, hi]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..400 {
        if hi - lo <= tol * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        x1
    } else {
        x2
    }
}
