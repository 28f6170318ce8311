//! Game definitions, corruption accounting, and the run loops that tie
//! learners, games, and adversaries together.
//!
//! ```
//! use corrupted_games::adversary::NoAdversary;
//! use corrupted_games::engine::{run_general_sum, Budgets, GeneralSumGame};
//! use corrupted_games::metrics::ce_gap;
//!
//! // a 2x2 coordination game, utilities flattened over joint actions
//! let game = GeneralSumGame::new(
//!     vec![2, 2],
//!     vec![vec![1.0, 0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0, 1.0]],
//! )?;
//! let budgets = [Budgets::honest(), Budgets::honest()];
//! let run = run_general_sum(&game, &budgets, &mut NoAdversary, 50)?;
//! let gap = ce_gap(&run.traces())?;
//! assert!(gap.is_finite() && run.stability_flags.iter().all(|&s| s));
//! # Ok::<(), corrupted_games::Error>(())
//! ```

pub mod corruption;
pub mod game;
pub mod runs;

pub use corruption::{Budgets, CorruptionLedger, PlayerLedger, OBSERVED_UTILITY_CLAMP};
pub use game::{GeneralSumGame, ZeroSumGame, MAX_JOINT_ACTIONS};
pub use runs::{
    average_strategy, run_general_sum, run_zero_sum, Algorithm, GeneralSumRun, MatrixPlayer,
    ZeroSumRound, ZeroSumRun,
};
