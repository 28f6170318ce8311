//! Corruption and opponent constructions: regret-forcing lower-bound games,
//! the Rademacher sequence behind them, and generic corruption schedules for
//! experiments.
//!
//! An [`Adversary`] declares per-round deltas; the engine's ledger scales
//! them to the configured budgets, so a schedule can never overspend even if
//! its own arithmetic is sloppy.
//!
//! The forced-vertex construction pins the row player to a dominated action
//! until the strategy budget runs out, which provably costs at least half
//! the budget in true-utility regret:
//!
//! ```
//! use corrupted_games::adversary::lower_bound_ii;
//! use corrupted_games::engine::{run_zero_sum, Algorithm, Budgets};
//! use corrupted_games::metrics::external_regret;
//!
//! let budget = 40.0;
//! let (game, mut adversary) = lower_bound_ii(2, budget);
//! let run = run_zero_sum(
//!     &game,
//!     Algorithm::AdaptiveEntropy,
//!     Algorithm::AdaptiveEntropy,
//!     &[Budgets::new(budget, 0.0), Budgets::honest()],
//!     &mut adversary,
//!     70,
//! )?;
//! let traces = run.traces();
//! let regret = external_regret(&traces[0].played, &traces[0].true_utility)?;
//! assert!(regret >= budget / 2.0 - 1e-9);
//! # Ok::<(), corrupted_games::Error>(())
//! ```

use crate::engine::game::ZeroSumGame;
use crate::rng::Stream;
use crate::simplex::SimplexVector;
use serde::{Deserialize, Serialize};

/// Per-round corruption source. Deltas are on top of the suggestion
/// (strategies) or the true utility (observations); `None` means no
/// corruption this round.
pub trait Adversary {
    fn strategy_delta(
        &mut self,
        _player: usize,
        _t: usize,
        _suggestion: &SimplexVector,
    ) -> Option<Vec<f64>> {
        None
    }

    fn utility_delta(&mut self, _player: usize, _t: usize, _true_utility: &[f64]) -> Option<Vec<f64>> {
        None
    }

    /// Called once per round with every player's true utility, after the
    /// round resolves. Schedules that react to play history hook in here.
    fn post_round(&mut self, _player: usize, _true_utility: &[f64]) {}
}

/// The honest regime: no corruption at all.
#[derive(Debug, Default)]
pub struct NoAdversary;

impl Adversary for NoAdversary {}

/// T vectors `sigma_t (e_1 - e_2)` with independent fair signs, the
/// regret-forcing sequence of the simplex lower bound.
pub fn rademacher_sequence(seed: u64, rounds: usize, dim: usize) -> Vec<Vec<f64>> {
    assert!(dim >= 2 && rounds >= 1);
    let mut stream = Stream::derive(seed, &[0x5261_6465]);
    (0..rounds)
        .map(|_| {
            let sign = stream.next_sign();
            let mut v = vec![0.0; dim];
            v[0] = sign;
            v[1] = -sign;
            v
        })
        .collect()
}

/// Monte-Carlo estimate of `E |sum_t sigma_t|` over `seeds` independent
/// sign sequences of length `rounds`. Used as the empirical Khintchine
/// floor; the analytic bound is `sqrt(rounds / 2)`.
pub fn mean_abs_sign_sum(rounds: usize, seeds: usize, master_seed: u64) -> f64 {
    let mut total = 0.0;
    for s in 0..seeds {
        let mut stream = Stream::derive(master_seed, &[0x6b68_696e, s as u64]);
        let sum: f64 = (0..rounds).map(|_| stream.next_sign()).sum();
        total += sum.abs();
    }
    total / seeds as f64
}

/// Lower bound (i): zero payoff matrix with Rademacher-corrupted reward
/// observations for the x-player during the first `floor(budget/2)` rounds.
/// Each active round spends exactly 1 of the l-infinity utility budget.
pub struct UtilityRademacher {
    player: usize,
    active_rounds: usize,
    signs: Stream,
}

impl UtilityRademacher {
    /// Rademacher observation corruption for `player`, spending 1 per round
    /// for the first `floor(budget / 2)` rounds.
    pub fn new(player: usize, utility_budget: f64, seed: u64) -> Self {
        UtilityRademacher {
            player,
            active_rounds: (utility_budget / 2.0).floor() as usize,
            signs: Stream::derive(seed, &[0x6c62_0069, player as u64]),
        }
    }
}

pub fn lower_bound_i(
    m: usize,
    utility_budget: f64,
    seed: u64,
) -> (ZeroSumGame, UtilityRademacher) {
    assert!(m >= 2);
    let game = ZeroSumGame::new(vec![vec![0.0; 2]; m]).expect("zero matrix is valid");
    (game, UtilityRademacher::new(0, utility_budget, seed))
}

impl Adversary for UtilityRademacher {
    fn utility_delta(&mut self, player: usize, t: usize, true_utility: &[f64]) -> Option<Vec<f64>> {
        if player != self.player || t > self.active_rounds {
            return None;
        }
        let sign = self.signs.next_sign();
        let mut delta = vec![0.0; true_utility.len()];
        delta[0] = sign;
        delta[1] = -sign;
        Some(delta)
    }
}

/// Lower bound (ii): rows `1..m_x - 1` of the payoff matrix are all ones,
/// row `m_x` is all zeros, and the x-player's played strategy is forced to
/// the dominated vertex `e_{m_x}` for the first `floor(budget/2)` rounds.
/// Forces `Reg_{x,g} >= budget / 2` against any algorithm.
pub struct ForcedVertex {
    player: usize,
    vertex: usize,
    active_rounds: usize,
}

impl ForcedVertex {
    pub fn new(player: usize, vertex: usize, strategy_budget: f64) -> Self {
        ForcedVertex { player, vertex, active_rounds: (strategy_budget / 2.0).floor() as usize }
    }
}

pub fn lower_bound_ii(m_x: usize, strategy_budget: f64) -> (ZeroSumGame, ForcedVertex) {
    assert!(m_x >= 2);
    let m_y = 2;
    let mut payoff = vec![vec![1.0; m_y]; m_x];
    payoff[m_x - 1] = vec![0.0; m_y];
    let game = ZeroSumGame::new(payoff).expect("0/1 matrix is valid");
    (game, ForcedVertex::new(0, m_x - 1, strategy_budget))
}

impl Adversary for ForcedVertex {
    fn strategy_delta(
        &mut self,
        player: usize,
        t: usize,
        suggestion: &SimplexVector,
    ) -> Option<Vec<f64>> {
        if player != self.player || t > self.active_rounds {
            return None;
        }
        let mut delta: Vec<f64> = suggestion.as_slice().iter().map(|s| -s).collect();
        delta[self.vertex] += 1.0;
        Some(delta)
    }
}

/// Lower bound (iii): the 2x3 payoff matrix `[[1,0,-1],[0,1,-1]]` whose
/// column player can realize any reward vector `g` in `[-1/3, 1/3]^2` as
/// `A y`. During active rounds the y-strategy is replaced by the point
/// realizing a 1/3-scaled Rademacher reward.
///
/// The 1/3 scale keeps `y = (g_1 + y_3, g_2 + y_3, y_3)`,
/// `y_3 = (1 - g_1 - g_2)/3`, inside the simplex for both sign patterns; the
/// unscaled construction would need `y_1 = 4/3` for `g = (1, -1)`.
pub struct ColumnRademacher {
    active_rounds: usize,
    signs: Stream,
}

impl ColumnRademacher {
    pub fn new(strategy_budget_y: f64, seed: u64) -> Self {
        ColumnRademacher {
            active_rounds: (strategy_budget_y / 2.0).floor() as usize,
            signs: Stream::derive(seed, &[0x6c62_0169]),
        }
    }
}

pub fn lower_bound_iii(strategy_budget_y: f64, seed: u64) -> (ZeroSumGame, ColumnRademacher) {
    let game = ZeroSumGame::new(vec![vec![1.0, 0.0, -1.0], vec![0.0, 1.0, -1.0]])
        .expect("fixed matrix is valid");
    (game, ColumnRademacher::new(strategy_budget_y, seed))
}

/// The y-strategy realizing reward `g = (g1, g2)` as `A y` for the lower
/// bound (iii) matrix.
pub fn column_strategy_for_reward(g1: f64, g2: f64) -> SimplexVector {
    let y3 = (1.0 - g1 - g2) / 3.0;
    SimplexVector::validate(vec![g1 + y3, g2 + y3, y3], 1e-9)
        .expect("reward within [-1/3, 1/3]^2 stays feasible")
}

impl Adversary for ColumnRademacher {
    fn strategy_delta(
        &mut self,
        player: usize,
        t: usize,
        suggestion: &SimplexVector,
    ) -> Option<Vec<f64>> {
        if player != 1 || t > self.active_rounds {
            return None;
        }
        let sign = self.signs.next_sign();
        let target = column_strategy_for_reward(sign / 3.0, -sign / 3.0);
        Some(
            target
                .as_slice()
                .iter()
                .zip(suggestion.as_slice())
                .map(|(t, s)| t - s)
                .collect(),
        )
    }
}

/// Shape of a generic corruption schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// Full-rate corruption until the budget runs out.
    Frontloaded,
    /// Budget spread evenly over the horizon.
    Periodic,
    /// Strategy corruption pushed toward the currently worst empirical
    /// action.
    Targeted,
}

/// What a generic schedule corrupts.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleMode {
    /// Push the played strategy toward `target_action`.
    Strategy { target_action: usize },
    /// Add `pattern` (l-infinity norm at most 1) to the observed utility.
    Utility { pattern: Vec<f64> },
}

/// Generic experiment knob: frontloaded, periodic, or targeted corruption
/// for one player.
pub struct GenericSchedule {
    player: usize,
    kind: ScheduleKind,
    mode: ScheduleMode,
    budget: f64,
    horizon: usize,
    /// Cumulative true utilities, for the targeted kind.
    cumulative: Vec<f64>,
}

impl GenericSchedule {
    pub fn new(
        player: usize,
        kind: ScheduleKind,
        mode: ScheduleMode,
        budget: f64,
        horizon: usize,
    ) -> Self {
        assert!(budget >= 0.0);
        if let ScheduleMode::Utility { pattern } = &mode {
            assert!(pattern.iter().all(|d| d.abs() <= 1.0));
        }
        GenericSchedule { player, kind, mode, budget, horizon, cumulative: Vec::new() }
    }

    fn per_round_scale(&self, t: usize, full_spend: f64) -> f64 {
        match self.kind {
            ScheduleKind::Frontloaded | ScheduleKind::Targeted => {
                let active = (self.budget / full_spend).ceil() as usize;
                if t <= active {
                    1.0
                } else {
                    0.0
                }
            }
            ScheduleKind::Periodic => {
                let per_round = self.budget / self.horizon as f64;
                (per_round / full_spend).min(1.0)
            }
        }
    }
}

impl Adversary for GenericSchedule {
    fn strategy_delta(
        &mut self,
        player: usize,
        t: usize,
        suggestion: &SimplexVector,
    ) -> Option<Vec<f64>> {
        if player != self.player || self.budget == 0.0 {
            return None;
        }
        let target = match (&self.mode, self.kind) {
            (ScheduleMode::Strategy { target_action }, ScheduleKind::Frontloaded)
            | (ScheduleMode::Strategy { target_action }, ScheduleKind::Periodic) => *target_action,
            (ScheduleMode::Strategy { .. }, ScheduleKind::Targeted) => {
                if self.cumulative.is_empty() {
                    0
                } else {
                    // worst empirical action so far
                    self.cumulative
                        .iter()
                        .enumerate()
                        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                        .map(|(k, _)| k)
                        .unwrap()
                }
            }
            (ScheduleMode::Utility { .. }, _) => return None,
        };
        let scale = self.per_round_scale(t, 2.0);
        if scale == 0.0 {
            return None;
        }
        let mut delta: Vec<f64> = suggestion.as_slice().iter().map(|s| -scale * s).collect();
        delta[target] += scale;
        Some(delta)
    }

    fn utility_delta(&mut self, player: usize, t: usize, _true_utility: &[f64]) -> Option<Vec<f64>> {
        if player != self.player || self.budget == 0.0 {
            return None;
        }
        let ScheduleMode::Utility { pattern } = &self.mode else {
            return None;
        };
        let scale = self.per_round_scale(t, 1.0);
        if scale == 0.0 {
            return None;
        }
        Some(pattern.iter().map(|d| scale * d).collect())
    }

    fn post_round(&mut self, player: usize, true_utility: &[f64]) {
        if player != self.player {
            return;
        }
        if self.cumulative.is_empty() {
            self.cumulative = vec![0.0; true_utility.len()];
        }
        for (c, u) in self.cumulative.iter_mut().zip(true_utility) {
            *c += u;
        }
    }
}

/// Random corruption for robustness sweeps: with the given probabilities,
/// perturbs the strategy toward a random vertex and nudges the observed
/// utility toward a random target inside [-1, 1]. Keeping observations in
/// the true utility range means every regret-relation constant of the
/// corrupted-regime analysis applies unchanged.
pub struct RandomAdversary {
    player: usize,
    stream: Stream,
    strategy_prob: f64,
    utility_prob: f64,
    max_step: f64,
}

impl RandomAdversary {
    pub fn new(player: usize, seed: u64, strategy_prob: f64, utility_prob: f64, max_step: f64) -> Self {
        RandomAdversary {
            player,
            stream: Stream::derive(seed, &[0x7261_6e64, player as u64]),
            strategy_prob,
            utility_prob,
            max_step,
        }
    }
}

impl Adversary for RandomAdversary {
    fn strategy_delta(
        &mut self,
        player: usize,
        _t: usize,
        suggestion: &SimplexVector,
    ) -> Option<Vec<f64>> {
        if player != self.player || self.stream.next_f64() >= self.strategy_prob {
            return None;
        }
        let m = suggestion.dim();
        let vertex = self.stream.next_below(m);
        let mix = self.stream.next_range(0.0, self.max_step.min(1.0));
        let mut delta: Vec<f64> = suggestion.as_slice().iter().map(|s| -mix * s).collect();
        delta[vertex] += mix;
        Some(delta)
    }

    fn utility_delta(&mut self, player: usize, _t: usize, true_utility: &[f64]) -> Option<Vec<f64>> {
        if player != self.player || self.stream.next_f64() >= self.utility_prob {
            return None;
        }
        let step = self.stream.next_range(0.0, self.max_step);
        Some(
            true_utility
                .iter()
                .map(|&u| {
                    let target = self.stream.next_range(-1.0, 1.0);
                    (target - u).clamp(-step, step)
                })
                .collect(),
        )
    }
}

/// Chains several adversaries; the first non-empty delta per call wins.
/// Useful for combining, say, a strategy schedule with utility noise for
/// the same player.
pub struct Compose {
    inner: Vec<Box<dyn Adversary>>,
}

impl Compose {
    pub fn new(inner: Vec<Box<dyn Adversary>>) -> Self {
        Compose { inner }
    }
}

impl Adversary for Compose {
    fn strategy_delta(&mut self, player: usize, t: usize, s: &SimplexVector) -> Option<Vec<f64>> {
        self.inner.iter_mut().find_map(|a| a.strategy_delta(player, t, s))
    }

    fn utility_delta(&mut self, player: usize, t: usize, u: &[f64]) -> Option<Vec<f64>> {
        self.inner.iter_mut().find_map(|a| a.utility_delta(player, t, u))
    }

    fn post_round(&mut self, player: usize, u: &[f64]) {
        for a in &mut self.inner {
            a.post_round(player, u);
        }
    }
}

/// Dispatches to one adversary per player, so independent schedules compose.
pub struct PerPlayer {
    inner: Vec<Box<dyn Adversary>>,
}

impl PerPlayer {
    pub fn new(inner: Vec<Box<dyn Adversary>>) -> Self {
        PerPlayer { inner }
    }
}

impl Adversary for PerPlayer {
    fn strategy_delta(&mut self, player: usize, t: usize, s: &SimplexVector) -> Option<Vec<f64>> {
        self.inner.get_mut(player)?.strategy_delta(player, t, s)
    }

    fn utility_delta(&mut self, player: usize, t: usize, u: &[f64]) -> Option<Vec<f64>> {
        self.inner.get_mut(player)?.utility_delta(player, t, u)
    }

    fn post_round(&mut self, player: usize, u: &[f64]) {
        if let Some(a) = self.inner.get_mut(player) {
            a.post_round(player, u);
        }
    }
}
