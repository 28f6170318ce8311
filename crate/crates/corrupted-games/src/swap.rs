//! Swap-regret minimization by reduction to per-action external-regret
//! experts.
//!
//! One log-barrier expert runs per action. Each round their outputs are
//! stacked as the rows of a row-stochastic transition matrix, the suggestion
//! is a stationary distribution of that chain, and the observed utility is
//! scaled back to each expert by the suggestion's weight on its action.
//!
//! The module also polices the Markov-chain stability quantities
//! `mu_a = max_b |1 - y_a(b)/y_a_prev(b)|`: when `sum_a mu_a <= 1/2` the
//! stationary distribution moves slowly (`||x - x_prev||_1 <= 8 sum_a mu_a`),
//! which is what the regret analysis of the reduction relies on. Violations
//! clear a flag rather than aborting, because heavy corruption can break the
//! precondition while the run must still be measured.
//!
//! ```
//! use corrupted_games::swap::SwapLearner;
//!
//! let mut learner = SwapLearner::new(3, 2, 100)?;
//! for t in 0..20 {
//!     let (suggestion, rows, _stability) = learner.round()?;
//!     // the suggestion is stationary for the chain formed by the rows
//!     let residual: f64 = (0..3)
//!         .map(|b| {
//!             let inflow: f64 = (0..3).map(|a| suggestion[a] * rows[a][b]).sum();
//!             (inflow - suggestion[b]).abs()
//!         })
//!         .sum();
//!     assert!(residual <= 1e-8);
//!     let utility = vec![0.3, -0.1, (t as f64).cos() * 0.5];
//!     learner.feedback(&suggestion, &utility)?;
//! }
//! # Ok::<(), corrupted_games::Error>(())
//! ```

use crate::error::{Error, Result};
use crate::logbarrier::LogBarrierExpert;
use crate::simplex::SimplexVector;

const POWER_ITERATION_CAP: usize = 1_000_000;

/// Default residual target for suggestions emitted by [`SwapLearner`].
///
/// Much tighter than the 1e-8 contract so that the swap-to-experts regret
/// identity survives summation over hundreds of rounds.
pub const STATIONARY_TOL: f64 = 1e-12;

/// Row-stochastic matrix assembled from expert outputs; row `a` is expert
/// `a`'s distribution.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    rows: Vec<SimplexVector>,
}

impl TransitionMatrix {
    /// Requires a square matrix: as many rows as actions per row.
    pub fn new(rows: Vec<SimplexVector>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::EmptySequence);
        }
        for row in &rows {
            if row.dim() != m {
                return Err(Error::DimensionMismatch { left: row.dim(), right: m });
            }
        }
        Ok(TransitionMatrix { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, a: usize) -> &SimplexVector {
        &self.rows[a]
    }

    /// `Q^T x` for a probability vector `x`.
    pub fn transpose_apply(&self, x: &[f64]) -> Vec<f64> {
        let m = self.dim();
        let mut out = vec![0.0; m];
        for (a, row) in self.rows.iter().enumerate() {
            let xa = x[a];
            for b in 0..m {
                out[b] += xa * row[b];
            }
        }
        out
    }

    /// `||Q^T x - x||_1`.
    pub fn stationarity_residual(&self, x: &SimplexVector) -> f64 {
        let qx = self.transpose_apply(x.as_slice());
        qx.iter()
            .zip(x.as_slice())
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

/// A stationary distribution of the chain `Q`, to residual `tol` in l1.
///
/// Lazy power iteration `x <- (x + Q^T x)/2` from the uniform start: the lazy
/// map removes periodicity while fixing the same stationary set, and the
/// fixed start makes the selected distribution deterministic even when the
/// chain is reducible.
///
/// ```
/// use corrupted_games::simplex::SimplexVector;
/// use corrupted_games::swap::{stationary_distribution, TransitionMatrix};
/// let q = TransitionMatrix::new(vec![
///     SimplexVector::validate(vec![0.9, 0.1], 1e-9).unwrap(),
///     SimplexVector::validate(vec![0.5, 0.5], 1e-9).unwrap(),
/// ]).unwrap();
/// let x = stationary_distribution(&q, 1e-10).unwrap();
/// assert!((x[0] - 5.0 / 6.0).abs() < 1e-9);
/// ```
pub fn stationary_distribution(q: &TransitionMatrix, tol: f64) -> Result<SimplexVector> {
    let m = q.dim();
    let mut x = vec![1.0 / m as f64; m];
    for _ in 0..POWER_ITERATION_CAP {
        let qx = q.transpose_apply(&x);
        let residual: f64 = qx.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        if residual <= tol {
            // renormalize away accumulated round-off before constructing
            let sum: f64 = x.iter().sum();
            let x: Vec<f64> = x.iter().map(|v| v / sum).collect();
            return Ok(SimplexVector::from_normalized(x));
        }
        for k in 0..m {
            x[k] = 0.5 * (x[k] + qx[k]);
        }
    }
    Err(Error::NoConvergence(POWER_ITERATION_CAP))
}

/// Per-round stability diagnostics recorded by [`SwapLearner::round`].
#[derive(Debug, Clone)]
pub struct StabilityRecord {
    /// `mu_a` per action (all zero on the first round).
    pub mu: Vec<f64>,
    /// Stationarity residual of the emitted suggestion.
    pub residual: f64,
    /// False once `sum_a mu_a > 1/2` was observed at this round.
    pub stable: bool,
}

/// The swap-regret learner of one player: `m` log-barrier experts plus the
/// Markov-chain machinery.
#[derive(Debug, Clone)]
pub struct SwapLearner {
    experts: Vec<LogBarrierExpert>,
    previous_rows: Option<Vec<SimplexVector>>,
    current_suggestion: Option<SimplexVector>,
    /// True while every round so far satisfied `sum_a mu_a <= 1/2`.
    stability_flag: bool,
    round: usize,
}

impl SwapLearner {
    pub fn new(dimension: usize, player_count: usize, horizon: usize) -> Result<Self> {
        let experts = (0..dimension)
            .map(|_| LogBarrierExpert::new(dimension, player_count, horizon))
            .collect::<Result<Vec<_>>>()?;
        Ok(SwapLearner {
            experts,
            previous_rows: None,
            current_suggestion: None,
            stability_flag: true,
            round: 1,
        })
    }

    pub fn dim(&self) -> usize {
        self.experts.len()
    }

    pub fn stability_flag(&self) -> bool {
        self.stability_flag
    }

    pub fn expert(&self, a: usize) -> &LogBarrierExpert {
        &self.experts[a]
    }

    /// Learning rates of all experts for the current round.
    pub fn learning_rates(&self) -> Vec<f64> {
        self.experts.iter().map(|e| e.learning_rate()).collect()
    }

    /// Steps every expert, assembles the transition matrix, and returns the
    /// stationary suggestion along with the round's stability diagnostics
    /// and the expert rows.
    pub fn round(&mut self) -> Result<(SimplexVector, Vec<SimplexVector>, StabilityRecord)> {
        let rows = self
            .experts
            .iter()
            .map(|e| e.step())
            .collect::<Result<Vec<_>>>()?;

        let mu: Vec<f64> = match &self.previous_rows {
            None => vec![0.0; self.dim()],
            Some(prev) => rows
                .iter()
                .zip(prev)
                .map(|(now, before)| {
                    now.as_slice()
                        .iter()
                        .zip(before.as_slice())
                        .map(|(&n, &b)| (1.0 - n / b).abs())
                        .fold(0.0, f64::max)
                })
                .collect(),
        };
        let mu_sum: f64 = mu.iter().sum();
        let stable_now = mu_sum <= 0.5;
        if !stable_now {
            self.stability_flag = false;
        }

        let q = TransitionMatrix::new(rows.clone())?;
        let suggestion = stationary_distribution(&q, STATIONARY_TOL)?;
        let residual = q.stationarity_residual(&suggestion);
        debug_assert!(residual <= 1e-8);

        self.previous_rows = Some(rows.clone());
        self.current_suggestion = Some(suggestion.clone());
        Ok((suggestion, rows, StabilityRecord { mu, residual, stable: stable_now }))
    }

    /// Feeds the corrupted utility back: expert `a` observes
    /// `suggestion(a) * utility`.
    pub fn feedback(&mut self, suggestion: &SimplexVector, utility: &[f64]) -> Result<()> {
        if utility.len() != self.dim() || suggestion.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: utility.len(), right: self.dim() });
        }
        for a in 0..self.dim() {
            let scaled: Vec<f64> = utility.iter().map(|u| suggestion[a] * u).collect();
            self.experts[a] = self.experts[a].observe(&scaled)?;
        }
        self.round += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;
    use crate::simplex::SimplexVector;

    fn sv(v: Vec<f64>) -> SimplexVector {
        SimplexVector::validate(v, 1e-9).unwrap()
    }

    #[test]
    fn identity_chain_keeps_uniform_start() {
        let q = TransitionMatrix::new(vec![sv(vec![1.0, 0.0]), sv(vec![0.0, 1.0])]).unwrap();
        let x = stationary_distribution(&q, 1e-10).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn symmetric_chain() {
        let q = TransitionMatrix::new(vec![sv(vec![0.5, 0.5]), sv(vec![0.5, 0.5])]).unwrap();
        let x = stationary_distribution(&q, 1e-10).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_state_balance_equations() {
        let q = TransitionMatrix::new(vec![sv(vec![0.9, 0.1]), sv(vec![0.5, 0.5])]).unwrap();
        let x = stationary_distribution(&q, 1e-12).unwrap();
        assert!((x[0] - 5.0 / 6.0).abs() < 1e-10);
        assert!((x[1] - 1.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn random_chains_meet_residual_contract() {
        let mut rng = Stream::derive(3, &[9]);
        for _ in 0..100 {
            let m = 2 + rng.next_below(7);
            let rows: Vec<SimplexVector> = (0..m)
                .map(|_| {
                    let raw: Vec<f64> = (0..m).map(|_| rng.next_f64() + 1e-3).collect();
                    let sum: f64 = raw.iter().sum();
                    sv(raw.iter().map(|x| x / sum).collect())
                })
                .collect();
            let q = TransitionMatrix::new(rows).unwrap();
            let x = stationary_distribution(&q, 1e-10).unwrap();
            assert!(q.stationarity_residual(&x) <= 1e-8);
        }
    }

    #[test]
    fn fresh_learner_suggests_uniform() {
        let mut l = SwapLearner::new(3, 2, 100).unwrap();
        let (suggestion, rows, rec) = l.round().unwrap();
        for &p in suggestion.as_slice() {
            assert!((p - 1.0 / 3.0).abs() < 1e-10);
        }
        assert_eq!(rows.len(), 3);
        assert!(rec.stable);
        assert!(rec.mu.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn rank_one_chain_returns_common_row() {
        let row = sv(vec![0.2, 0.3, 0.5]);
        let q = TransitionMatrix::new(vec![row.clone(), row.clone(), row.clone()]).unwrap();
        let x = stationary_distribution(&q, 1e-12).unwrap();
        for k in 0..3 {
            assert!((x[k] - row[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn feedback_scales_by_suggestion_weight() {
        let mut l = SwapLearner::new(2, 2, 100).unwrap();
        let (suggestion, _, _) = l.round().unwrap();
        // uniform suggestion: each expert sees utility / 2
        l.feedback(&suggestion, &[1.0, -1.0]).unwrap();
        for a in 0..2 {
            assert!((l.expert(a).path_accumulator() - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn feedback_vertex_concentrates_on_one_expert() {
        let mut l = SwapLearner::new(2, 2, 100).unwrap();
        l.round().unwrap();
        let vertex = SimplexVector::vertex(2, 0);
        l.feedback(&vertex, &[1.0, -1.0]).unwrap();
        assert!(l.expert(0).path_accumulator() > 0.0);
        assert_eq!(l.expert(1).path_accumulator(), 0.0);
    }

    #[test]
    fn suggestion_matches_direct_stationary_solve() {
        // drive a learner with asymmetric feedback and cross-check each
        // suggestion against stationary_distribution on the same rows
        let mut l = SwapLearner::new(3, 2, 50).unwrap();
        let mut rng = Stream::derive(21, &[0]);
        for _ in 0..10 {
            let (suggestion, rows, rec) = l.round().unwrap();
            let q = TransitionMatrix::new(rows).unwrap();
            assert!(q.stationarity_residual(&suggestion) <= 1e-8);
            assert!(rec.residual <= 1e-8);
            let u: Vec<f64> = (0..3).map(|_| rng.next_range(-1.0, 1.0)).collect();
            l.feedback(&suggestion, &u).unwrap();
        }
    }
}
