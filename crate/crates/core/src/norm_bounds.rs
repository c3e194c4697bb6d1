//! Closed-form upper bounds on the `τ_{φ_p}` norm.
//!
//! For a centered variable supported on `[a, b]` write `c = (b − a)/2` and
//! `d = max{−a, b}`. Hoeffding's lemma gives `τ_{φ_2} ≤ c`, hence
//! `τ_{φ_p} ≤ c` for all `p ≥ 2`. For `1 < p < 2` the cumulant generating
//! function is dominated by `min{c²λ²/2, d|λ|}`, which in turn is dominated by
//! `φ_p(γ_p λ)` with
//!
//! ```text
//! γ_p = (c²/2d) · { p [2(d/c)² + 1/p − 1/2] }^{1/p}
//! ```
//!
//! the unique scale with `φ_p(γ_p · 2d/c²) = 2(d/c)²`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orlicz::RankP;

/// Support `[a, b]` of a centered bounded random variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundedSupport {
    a: f64,
    b: f64,
}

impl BoundedSupport {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a > 0.0 || b < 0.0 || a >= b {
            return Err(Error::InvalidSupport { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Half-width `(b − a)/2`.
    pub fn c(&self) -> f64 {
        0.5 * (self.b - self.a)
    }

    /// Largest excursion from zero, `max{−a, b}`.
    pub fn d(&self) -> f64 {
        (-self.a).max(self.b)
    }
}

/// Per-step increment bounds `d_1, ..., d_n` of a martingale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncrementSchedule {
    steps: Vec<f64>,
    #[serde(skip)]
    sum_sq: f64,
    #[serde(skip)]
    sum: f64,
}

impl IncrementSchedule {
    pub fn new(steps: Vec<f64>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidSchedule("at least one step is required".into()));
        }
        if let Some(bad) = steps.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(Error::InvalidSchedule(format!(
                "every increment bound must be positive and finite, got {bad}"
            )));
        }
        let sum_sq = steps.iter().map(|d| d * d).sum();
        let sum = steps.iter().sum();
        Ok(Self { steps, sum_sq, sum })
    }

    /// `n` equal steps of size `d`.
    pub fn uniform(n: usize, d: f64) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `Σ d_i²`.
    pub fn sum_sq(&self) -> f64 {
        self.sum_sq
    }

    /// `c = √(Σ d_i²)`.
    pub fn c(&self) -> f64 {
        self.sum_sq.sqrt()
    }

    /// `d = Σ d_i`, the almost-sure bound on `|ξ_n − ξ_0|`.
    pub fn d(&self) -> f64 {
        self.sum
    }
}

/// Where a norm bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Hoeffding,
    Lemma1,
    Combined,
    Empirical,
}

/// An upper bound on `τ_{φ_p}` for a given rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormBound {
    pub value: f64,
    pub rank: RankP,
    pub provenance: Provenance,
}

/// Hoeffding's lemma: `τ_{φ_p}(ξ) ≤ (b − a)/2`, valid for `p ≥ 2`.
pub fn hoeffding_norm(support: &BoundedSupport, rank: RankP) -> NormBound {
    NormBound {
        value: support.c(),
        rank,
        provenance: Provenance::Hoeffding,
    }
}

fn check_geometry(c: f64, d: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::domain(format!("c must be positive, got {c}")));
    }
    if !d.is_finite() || d < c {
        return Err(Error::domain(format!("need d >= c, got c = {c}, d = {d}")));
    }
    Ok(())
}

/// `γ_r`, the rank-`p` norm bound for a centered variable with half-width `c`
/// and maximal excursion `d`. Returns `c` for `p ≥ 2`.
pub fn gamma_r(c: f64, d: f64, rank: RankP) -> Result<NormBound> {
    check_geometry(c, d)?;
    let value = if rank.p() >= 2.0 {
        c
    } else {
        let p = rank.p();
        let ratio = d / c;
        c * c / (2.0 * d) * (p * (2.0 * ratio * ratio + 1.0 / p - 0.5)).powf(1.0 / p)
    };
    Ok(NormBound {
        value,
        rank,
        provenance: Provenance::Lemma1,
    })
}

/// `γ_r` for the support of a centered bounded variable.
pub fn gamma_for_support(support: &BoundedSupport, rank: RankP) -> NormBound {
    // BoundedSupport guarantees c > 0 and d >= c.
    gamma_r(support.c(), support.d(), rank).expect("support geometry is validated on construction")
}

/// Limit of `γ_p` as `p ↓ 1`: `d + c²/(4d)`.
pub fn gamma_one_limit(c: f64, d: f64) -> Result<f64> {
    check_geometry(c, d)?;
    Ok(d + c * c / (4.0 * d))
}

/// Norm bound for `ξ_n` given a bound `γ` on the increments' sum and a bound
/// `d0` on `τ_{φ_p}(ξ_0)`: `(γ^r + d0^r)^{1/r}`.
pub fn combined_norm(gamma: NormBound, d0: f64, rank: RankP) -> Result<NormBound> {
    if d0.is_nan() || d0 < 0.0 {
        return Err(Error::domain(format!("d0 must be nonnegative, got {d0}")));
    }
    if gamma.value.is_nan() || gamma.value < 0.0 {
        return Err(Error::domain(format!("gamma must be nonnegative, got {}", gamma.value)));
    }
    let value = if d0 == 0.0 {
        gamma.value
    } else if gamma.value == 0.0 {
        d0
    } else {
        let r = rank.r();
        (gamma.value.powf(r) + d0.powf(r)).powf(1.0 / r)
    };
    Ok(NormBound {
        value,
        rank,
        provenance: Provenance::Combined,
    })
}

/// `min{c²λ²/2, d|λ|}`, a majorant of the CGF of a centered variable with
/// half-width `c` and maximal excursion `d`.
pub fn lemma1_majorant(lambda: f64, c: f64, d: f64) -> f64 {
    let breakpoint = 2.0 * d / (c * c);
    if lambda.abs() <= breakpoint {
        0.5 * c * c * lambda * lambda
    } else {
        d * lambda.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::phi_eval;
    use proptest::prelude::*;

    fn rank(p: f64) -> RankP {
        RankP::new(p).unwrap()
    }

    #[test]
    fn support_validation() {
        assert!(BoundedSupport::new(-1.0, 1.0).is_ok());
        assert!(BoundedSupport::new(0.0, 1.0).is_ok());
        assert!(BoundedSupport::new(0.5, 1.0).is_err());
        assert!(BoundedSupport::new(-1.0, -0.5).is_err());
        assert!(BoundedSupport::new(0.0, 0.0).is_err());
        assert!(BoundedSupport::new(f64::NAN, 1.0).is_err());
        let s = BoundedSupport::new(-0.5, 1.5).unwrap();
        assert_eq!((s.c(), s.d()), (1.0, 1.5));
    }

    #[test]
    fn schedule_validation() {
        assert!(IncrementSchedule::new(vec![]).is_err());
        assert!(IncrementSchedule::new(vec![1.0, 0.0]).is_err());
        assert!(IncrementSchedule::new(vec![1.0, -1.0]).is_err());
        assert!(IncrementSchedule::new(vec![1.0, f64::INFINITY]).is_err());
        let s = IncrementSchedule::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(s.c(), 5.0);
        assert_eq!(s.d(), 7.0);
        let one = IncrementSchedule::new(vec![2.5]).unwrap();
        assert_eq!(one.c(), one.d());
    }

    #[test]
    fn hoeffding_examples() {
        let r = rank(2.0);
        for (a, b, want) in [(-1.0, 1.0, 1.0), (-2.0, 2.0, 2.0), (-0.5, 1.5, 1.0)] {
            let nb = hoeffding_norm(&BoundedSupport::new(a, b).unwrap(), r);
            assert_eq!(nb.value, want);
            assert_eq!(nb.provenance, Provenance::Hoeffding);
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_r(1.0, 1.0, rank(2.0)).unwrap().value, 1.0);
        assert_eq!(gamma_r(1.0, 1.0, rank(5.0)).unwrap().value, 1.0);
        let g = gamma_r(1.0, 1.0, rank(1.5)).unwrap().value;
        // 0.5 · 3.25^{2/3}
        assert!((g - 1.097_047_869_416_141).abs() < 1e-12, "{g}");
        assert!((phi_eval(&rank(1.5), 2.0 * g) - 2.0).abs() < 1e-12);
        assert!(gamma_r(1.0, 0.999, rank(1.5)).is_err());
        assert!(gamma_r(0.0, 1.0, rank(1.5)).is_err());
    }

    #[test]
    fn gamma_one_examples() {
        assert_eq!(gamma_one_limit(1.0, 1.0).unwrap(), 1.25);
        assert_eq!(gamma_one_limit(2.0, 2.0).unwrap(), 2.5);
        assert!((gamma_one_limit(1.0, 10.0).unwrap() - 10.025).abs() < 1e-15);
        assert!(gamma_one_limit(2.0, 1.0).is_err());
    }

    #[test]
    fn combined_examples() {
        let r = rank(1.5);
        let g = NormBound {
            value: 1.097_047_869_416_141,
            rank: r,
            provenance: Provenance::Lemma1,
        };
        assert_eq!(combined_norm(g, 0.0, r).unwrap().value, g.value);
        let v = combined_norm(g, 1.0, r).unwrap().value;
        assert!((v - 1.665_319_166_613_636_7).abs() < 1e-12, "{v}");
        let r2 = rank(2.0);
        let g3 = NormBound { value: 3.0, rank: r2, provenance: Provenance::Lemma1 };
        assert_eq!(combined_norm(g3, 4.0, r2).unwrap().value, 5.0);
        assert!(combined_norm(g3, -1.0, r2).is_err());
    }

    #[test]
    fn majorant_examples() {
        assert_eq!(lemma1_majorant(0.0, 1.3, 2.0), 0.0);
        assert_eq!(lemma1_majorant(2.0, 1.0, 1.0), 2.0);
        assert_eq!(lemma1_majorant(3.0, 1.0, 1.0), 3.0);
        assert_eq!(lemma1_majorant(-3.0, 1.0, 1.0), 3.0);
    }

    #[test]
    fn gamma_strictly_decreasing_below_two() {
        let grid: Vec<f64> = std::iter::once(1.01)
            .chain((1..=10).map(|k| 1.0 + 0.1 * k as f64))
            .collect();
        for (c, d) in [(1.0, 1.0), (0.5, 2.0), (3.0, 3.5)] {
            let vals: Vec<f64> = grid.iter().map(|&p| gamma_r(c, d, rank(p)).unwrap().value).collect();
            for w in vals.windows(2).take(vals.len() - 2) {
                assert!(w[1] < w[0]);
            }
            assert!(vals[vals.len() - 1] <= vals[vals.len() - 2]);
            assert_eq!(*vals.last().unwrap(), c);
        }
    }

    proptest! {
        #[test]
        fn defining_equation(c in 0.01f64..10.0, ratio in 1.0f64..20.0, p in 1.01f64..1.999) {
            let d = c * ratio;
            let g = gamma_r(c, d, rank(p)).unwrap().value;
            let lhs = phi_eval(&rank(p), g * 2.0 * d / (c * c));
            let rhs = 2.0 * ratio * ratio;
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0));
        }

        #[test]
        fn majorant_domination(c in 0.05f64..5.0, ratio in 1.0f64..10.0, p in 1.01f64..4.0, lambda in -100.0f64..100.0) {
            let d = c * ratio;
            let g = gamma_r(c, d, rank(p)).unwrap().value;
            let f = lemma1_majorant(lambda, c, d);
            prop_assert!(f <= phi_eval(&rank(p), g * lambda) * (1.0 + 1e-12) + 1e-12);
        }

        #[test]
        fn combined_symmetric_and_monotone(a in 0.0f64..10.0, b in 0.0f64..10.0, e in 0.0f64..1.0, p in 1.01f64..4.0) {
            let r = rank(p);
            let nb = |v| NormBound { value: v, rank: r, provenance: Provenance::Lemma1 };
            let ab = combined_norm(nb(a), b, r).unwrap().value;
            let ba = combined_norm(nb(b), a, r).unwrap().value;
            prop_assert!((ab - ba).abs() <= 1e-14 * ab.max(1.0));
            prop_assert!(combined_norm(nb(a + e), b, r).unwrap().value >= ab * (1.0 - 1e-15));
            prop_assert!(combined_norm(nb(a), b + e, r).unwrap().value >= ab * (1.0 - 1e-15));
        }
    }
}
