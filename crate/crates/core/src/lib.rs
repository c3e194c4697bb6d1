//! Concentration bounds in spaces of subgaussian-of-rank-`p` random variables.
//!
//! A centered random variable `ξ` is subgaussian of rank `p > 1` when its
//! cumulant generating function is dominated by `φ_p(cλ)` for some scale `c`,
//! where `φ_p(x) = x²/2` on `|x| ≤ 1` and `|x|^p/p − 1/p + 1/2` beyond. The
//! smallest such `c` is the norm `τ_{φ_p}(ξ)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`orlicz`]: the `φ_p` family, its inverse and its convex conjugate `φ_q`.
//! * [`norm_bounds`]: explicit bounds on `τ_{φ_p}` for bounded centered
//!   variables and for martingales with a rank-`p` starting value.
//! * [`tail_bounds`]: the resulting tail inequalities, the classic
//!   Hoeffding–Azuma bound, and the crossover threshold `ε_p`.
//! * [`estimator`]: empirical CGF and data-driven norm estimation.
//! * [`simulate`]: samplers, martingale path generators and the Monte Carlo
//!   validation harness.
//! * [`report`] and [`cli`]: serialisable reports and the command line.

pub mod cli;
pub mod error;
pub mod estimator;
pub mod norm_bounds;
pub mod orlicz;
pub mod report;
pub mod simulate;
pub mod tail_bounds;

pub use error::{Error, Result};
pub use norm_bounds::{BoundedSupport, IncrementSchedule, NormBound, Provenance};
pub use orlicz::RankP;

/// Crate version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
