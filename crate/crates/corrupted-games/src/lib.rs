//! Learning dynamics in games under budgeted corruption.
//!
//! The library provides optimistic no-regret learners over the simplex
//! (entropy- and log-barrier-regularized FTRL with adaptive learning rates),
//! a swap-regret minimizer built from per-action experts and a stationary
//! distribution, game run loops where an adversary with bounded budgets can
//! tamper with played strategies and observed utilities, and the metrics and
//! audits that quantify what corruption does to regret and equilibrium
//! convergence.
//!
//! A typical zero-sum experiment:
//!
//! ```
//! use corrupted_games::adversary::NoAdversary;
//! use corrupted_games::engine::{run_zero_sum, Algorithm, Budgets, ZeroSumGame};
//! use corrupted_games::metrics::{four_variant_report, nash_gap};
//!
//! let game = ZeroSumGame::new(vec![vec![1.0, -1.0], vec![-1.0, 1.0]])?;
//! let run = run_zero_sum(
//!     &game,
//!     Algorithm::AdaptiveEntropy,
//!     Algorithm::AdaptiveEntropy,
//!     &[Budgets::honest(), Budgets::honest()],
//!     &mut NoAdversary,
//!     100,
//! )?;
//! let report = four_variant_report(&run.traces())?;
//! let (x_bar, y_bar) = run.average_played();
//! let gap = nash_gap(game.payoff(), &x_bar, &y_bar)?;
//! assert!(gap < 0.2);
//! # Ok::<(), corrupted_games::Error>(())
//! ```

pub mod adversary;
pub mod audit;
pub mod engine;
pub mod entropy;
pub mod error;
pub mod logbarrier;
pub mod metrics;
pub mod rng;
pub mod simplex;
pub mod swap;
pub mod verify;

pub use error::{Error, Result};
