//! Run loops for zero-sum matrix games (single-simplex learners) and
//! general-sum games (one swap-regret learner per player), with corruption
//! applied through the ledger each round.
//!
//! Every round is recorded in full — suggested and played strategies, true
//! and observed utilities, learning rates, expert rows — because the regret
//! audits need the complete history, including the would-be iterate and
//! learning rate of round `T + 1`.

use crate::adversary::Adversary;
use crate::entropy::{constant_oftrl_step, hedge_step, EntropyOftrl};
use crate::error::Result;
use crate::metrics::PlayerTrace;
use crate::simplex::SimplexVector;
use crate::swap::{StabilityRecord, SwapLearner};

use super::corruption::{Budgets, CorruptionLedger};
use super::game::{GeneralSumGame, ZeroSumGame};

/// Learner choice for one side of a zero-sum run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    /// Entropy OFTRL with the adaptive learning rate.
    AdaptiveEntropy,
    /// Hedge (no optimism) at a fixed rate.
    Hedge { rate: f64 },
    /// Entropy OFTRL at a fixed rate.
    ConstantOftrl { rate: f64 },
}

/// One side of a zero-sum run: an entropy-family learner behind the chosen
/// algorithm.
#[derive(Debug, Clone)]
pub struct MatrixPlayer {
    state: EntropyOftrl,
    algorithm: Algorithm,
}

impl MatrixPlayer {
    pub fn new(dimension: usize, algorithm: Algorithm) -> Self {
        MatrixPlayer { state: EntropyOftrl::new(dimension), algorithm }
    }

    pub fn state(&self) -> &EntropyOftrl {
        &self.state
    }

    pub fn suggest(&self) -> SimplexVector {
        match self.algorithm {
            Algorithm::AdaptiveEntropy => self.state.step(),
            Algorithm::Hedge { rate } => hedge_step(self.state.cumulative_utility(), rate),
            Algorithm::ConstantOftrl { rate } => constant_oftrl_step(&self.state, rate),
        }
    }

    pub fn learning_rate(&self) -> f64 {
        match self.algorithm {
            Algorithm::AdaptiveEntropy => self.state.learning_rate(),
            Algorithm::Hedge { rate } | Algorithm::ConstantOftrl { rate } => rate,
        }
    }

    pub fn observe(&mut self, utility: &[f64]) -> Result<()> {
        self.state = self.state.observe(utility)?;
        Ok(())
    }
}

/// Everything recorded about one round of a zero-sum run. Utilities are kept
/// in each player's native convention: the row player sees rewards `A y`, the
/// column player sees losses `A^T x`.
#[derive(Debug, Clone)]
pub struct ZeroSumRound {
    pub x_suggested: SimplexVector,
    pub x_played: SimplexVector,
    pub y_suggested: SimplexVector,
    pub y_played: SimplexVector,
    pub reward_true: Vec<f64>,
    pub reward_observed: Vec<f64>,
    pub loss_true: Vec<f64>,
    pub loss_observed: Vec<f64>,
    pub eta_x: f64,
    pub eta_y: f64,
}

/// A finished zero-sum run, including the round-`T + 1` iterates and rates
/// that the regret audits evaluate.
#[derive(Debug, Clone)]
pub struct ZeroSumRun {
    pub rounds: Vec<ZeroSumRound>,
    pub final_x: SimplexVector,
    pub final_y: SimplexVector,
    pub final_eta_x: f64,
    pub final_eta_y: f64,
    pub ledger: CorruptionLedger,
}

impl ZeroSumRun {
    /// Player traces in the utility-maximization convention; the column
    /// player's utilities are negated losses.
    pub fn traces(&self) -> [PlayerTrace; 2] {
        let mut x_trace = PlayerTrace::default();
        let mut y_trace = PlayerTrace::default();
        for r in &self.rounds {
            x_trace.suggested.push(r.x_suggested.clone());
            x_trace.played.push(r.x_played.clone());
            x_trace.true_utility.push(r.reward_true.clone());
            x_trace.observed_utility.push(r.reward_observed.clone());
            y_trace.suggested.push(r.y_suggested.clone());
            y_trace.played.push(r.y_played.clone());
            y_trace.true_utility.push(r.loss_true.iter().map(|l| -l).collect());
            y_trace.observed_utility.push(r.loss_observed.iter().map(|l| -l).collect());
        }
        [x_trace, y_trace]
    }

    /// Time averages of the played strategies.
    pub fn average_played(&self) -> (SimplexVector, SimplexVector) {
        let xs: Vec<&SimplexVector> = self.rounds.iter().map(|r| &r.x_played).collect();
        let ys: Vec<&SimplexVector> = self.rounds.iter().map(|r| &r.y_played).collect();
        (average_strategy(&xs), average_strategy(&ys))
    }
}

/// Entrywise mean of a nonempty strategy sequence.
pub fn average_strategy(sequence: &[&SimplexVector]) -> SimplexVector {
    assert!(!sequence.is_empty());
    let m = sequence[0].dim();
    let mut avg = vec![0.0; m];
    for s in sequence {
        for k in 0..m {
            avg[k] += s[k];
        }
    }
    let t = sequence.len() as f64;
    for v in &mut avg {
        *v /= t;
    }
    SimplexVector::from_normalized(avg)
}

/// Runs a two-player zero-sum game for `horizon` rounds. The adversary's
/// player indices are 0 (row) and 1 (column); utility deltas apply to the
/// row player's reward vector and the column player's loss vector
/// respectively, while `post_round` reports both in the maximization
/// convention.
pub fn run_zero_sum(
    game: &ZeroSumGame,
    algorithm_x: Algorithm,
    algorithm_y: Algorithm,
    budgets: &[Budgets; 2],
    adversary: &mut dyn Adversary,
    horizon: usize,
) -> Result<ZeroSumRun> {
    let mut px = MatrixPlayer::new(game.rows(), algorithm_x);
    let mut py = MatrixPlayer::new(game.cols(), algorithm_y);
    let mut ledger = CorruptionLedger::new(budgets);
    let mut rounds = Vec::with_capacity(horizon);

    for t in 1..=horizon {
        let x_suggested = px.suggest();
        let y_suggested = py.suggest();
        let eta_x = px.learning_rate();
        let eta_y = py.learning_rate();

        let dx = adversary.strategy_delta(0, t, &x_suggested);
        let x_played = ledger.apply_strategy_delta(0, &x_suggested, dx.as_deref())?;
        let dy = adversary.strategy_delta(1, t, &y_suggested);
        let y_played = ledger.apply_strategy_delta(1, &y_suggested, dy.as_deref())?;

        let reward_true = game.row_reward(&y_played)?;
        let loss_true = game.col_loss(&x_played)?;

        let dg = adversary.utility_delta(0, t, &reward_true);
        let reward_observed = ledger.apply_utility_delta(0, &reward_true, dg.as_deref())?;
        let dl = adversary.utility_delta(1, t, &loss_true);
        let loss_observed = ledger.apply_utility_delta(1, &loss_true, dl.as_deref())?;

        px.observe(&reward_observed)?;
        let y_utility: Vec<f64> = loss_observed.iter().map(|l| -l).collect();
        py.observe(&y_utility)?;

        adversary.post_round(0, &reward_true);
        let y_true_utility: Vec<f64> = loss_true.iter().map(|l| -l).collect();
        adversary.post_round(1, &y_true_utility);

        rounds.push(ZeroSumRound {
            x_suggested,
            x_played,
            y_suggested,
            y_played,
            reward_true,
            reward_observed,
            loss_true,
            loss_observed,
            eta_x,
            eta_y,
        });
    }

    Ok(ZeroSumRun {
        final_x: px.suggest(),
        final_y: py.suggest(),
        final_eta_x: px.learning_rate(),
        final_eta_y: py.learning_rate(),
        rounds,
        ledger,
    })
}

/// One player's record of one general-sum round.
#[derive(Debug, Clone)]
pub struct GeneralSumRoundPlayer {
    pub suggested: SimplexVector,
    pub played: SimplexVector,
    pub true_utility: Vec<f64>,
    pub observed_utility: Vec<f64>,
    /// Expert rows making up the transition matrix this round.
    pub expert_rows: Vec<SimplexVector>,
    /// Per-expert learning rates used this round.
    pub expert_rates: Vec<f64>,
    pub stability: StabilityRecord,
}

/// A finished general-sum run.
#[derive(Debug, Clone)]
pub struct GeneralSumRun {
    /// `rounds[t][i]` is player `i`'s record of round `t + 1`.
    pub rounds: Vec<Vec<GeneralSumRoundPlayer>>,
    /// Per player: the expert rows of the unplayed round `T + 1`.
    pub final_rows: Vec<Vec<SimplexVector>>,
    /// Per player: the expert learning rates of round `T + 1`.
    pub final_rates: Vec<Vec<f64>>,
    /// Per player: true iff every round satisfied the chain-stability
    /// precondition `sum_a mu_a <= 1/2`.
    pub stability_flags: Vec<bool>,
    pub ledger: CorruptionLedger,
}

impl GeneralSumRun {
    pub fn players(&self) -> usize {
        self.final_rows.len()
    }

    pub fn traces(&self) -> Vec<PlayerTrace> {
        let n = self.players();
        let mut traces = vec![PlayerTrace::default(); n];
        for round in &self.rounds {
            for (i, rec) in round.iter().enumerate() {
                traces[i].suggested.push(rec.suggested.clone());
                traces[i].played.push(rec.played.clone());
                traces[i].true_utility.push(rec.true_utility.clone());
                traces[i].observed_utility.push(rec.observed_utility.clone());
            }
        }
        traces
    }
}

/// Runs an `n`-player general-sum game for `horizon` rounds with one
/// swap-regret learner per player. Each learner's feedback is the corrupted
/// utility; the suggestion-weight scaling down to the experts happens inside
/// the learner.
pub fn run_general_sum(
    game: &GeneralSumGame,
    budgets: &[Budgets],
    adversary: &mut dyn Adversary,
    horizon: usize,
) -> Result<GeneralSumRun> {
    let n = game.players();
    assert_eq!(budgets.len(), n, "one budget pair per player");
    let mut learners = game
        .action_counts()
        .iter()
        .map(|&m| SwapLearner::new(m, n, horizon))
        .collect::<Result<Vec<_>>>()?;
    let mut ledger = CorruptionLedger::new(budgets);
    let mut rounds = Vec::with_capacity(horizon);

    for t in 1..=horizon {
        let mut suggested = Vec::with_capacity(n);
        let mut rows_all = Vec::with_capacity(n);
        let mut rates_all = Vec::with_capacity(n);
        let mut records = Vec::with_capacity(n);
        for learner in &mut learners {
            rates_all.push(learner.learning_rates());
            let (suggestion, rows, record) = learner.round()?;
            suggested.push(suggestion);
            rows_all.push(rows);
            records.push(record);
        }

        let mut played = Vec::with_capacity(n);
        for (i, s) in suggested.iter().enumerate() {
            let d = adversary.strategy_delta(i, t, s);
            played.push(ledger.apply_strategy_delta(i, s, d.as_deref())?);
        }

        let mut round_records = Vec::with_capacity(n);
        for i in 0..n {
            let true_utility = game.expected_utility(i, &played)?;
            let d = adversary.utility_delta(i, t, &true_utility);
            let observed_utility = ledger.apply_utility_delta(i, &true_utility, d.as_deref())?;
            learners[i].feedback(&suggested[i], &observed_utility)?;
            adversary.post_round(i, &true_utility);
            round_records.push(GeneralSumRoundPlayer {
                suggested: suggested[i].clone(),
                played: played[i].clone(),
                true_utility,
                observed_utility,
                expert_rows: rows_all[i].clone(),
                expert_rates: rates_all[i].clone(),
                stability: records[i].clone(),
            });
        }
        rounds.push(round_records);
    }

    let mut final_rows = Vec::with_capacity(n);
    let mut final_rates = Vec::with_capacity(n);
    let mut stability_flags = Vec::with_capacity(n);
    for learner in &mut learners {
        final_rates.push(learner.learning_rates());
        let (_, rows, _) = learner.round()?;
        final_rows.push(rows);
        stability_flags.push(learner.stability_flag());
    }

    Ok(GeneralSumRun { rounds, final_rows, final_rates, stability_flags, ledger })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::NoAdversary;

    fn pennies() -> ZeroSumGame {
        ZeroSumGame::new(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap()
    }

    #[test]
    fn honest_zero_sum_run_is_consistent() {
        let game = pennies();
        let run = run_zero_sum(
            &game,
            Algorithm::AdaptiveEntropy,
            Algorithm::AdaptiveEntropy,
            &[Budgets::honest(), Budgets::honest()],
            &mut NoAdversary,
            50,
        )
        .unwrap();
        assert_eq!(run.rounds.len(), 50);
        for r in &run.rounds {
            // honest: played == suggested, observed == true
            assert_eq!(r.x_played.as_slice(), r.x_suggested.as_slice());
            assert_eq!(r.reward_observed, r.reward_true);
            // zero-sum consistency: x^T g == -(y^T (-l))
            let xg = r.x_played.dot(&r.reward_true);
            let yl = r.y_played.dot(&r.loss_true);
            assert!((xg - yl).abs() < 1e-12);
        }
        assert_eq!(run.ledger.players[0].strategy_spent, 0.0);
        assert_eq!(run.ledger.players[1].utility_spent, 0.0);
    }

    #[test]
    fn symmetric_game_keeps_symmetric_play() {
        // matching pennies is symmetric under relabeling; both adaptive
        // learners start uniform and the uniform profile is the equilibrium
        let run = run_zero_sum(
            &pennies(),
            Algorithm::AdaptiveEntropy,
            Algorithm::AdaptiveEntropy,
            &[Budgets::honest(), Budgets::honest()],
            &mut NoAdversary,
            20,
        )
        .unwrap();
        for r in &run.rounds {
            assert!((r.x_played[0] - 0.5).abs() < 1e-12);
            assert!((r.y_played[0] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn traces_negate_column_losses() {
        let run = run_zero_sum(
            &pennies(),
            Algorithm::Hedge { rate: 0.1 },
            Algorithm::Hedge { rate: 0.1 },
            &[Budgets::honest(), Budgets::honest()],
            &mut NoAdversary,
            5,
        )
        .unwrap();
        let [_, y_trace] = run.traces();
        for (t, r) in run.rounds.iter().enumerate() {
            for k in 0..2 {
                assert_eq!(y_trace.true_utility[t][k], -r.loss_true[k]);
            }
        }
    }

    #[test]
    fn average_strategy_hand_value() {
        let a = SimplexVector::vertex(2, 0);
        let b = SimplexVector::vertex(2, 1);
        let avg = average_strategy(&[&a, &b]);
        assert!((avg[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn honest_general_sum_run_shapes() {
        let zs = pennies();
        let game = GeneralSumGame::from_zero_sum(&zs);
        let run = run_general_sum(
            &game,
            &[Budgets::honest(), Budgets::honest()],
            &mut NoAdversary,
            10,
        )
        .unwrap();
        assert_eq!(run.rounds.len(), 10);
        assert_eq!(run.players(), 2);
        assert!(run.stability_flags.iter().all(|&f| f));
        for round in &run.rounds {
            for rec in round {
                assert_eq!(rec.expert_rows.len(), 2);
                assert_eq!(rec.expert_rates.len(), 2);
                assert!(rec.stability.residual <= 1e-8);
                // honest: played == suggested
                assert_eq!(rec.played.as_slice(), rec.suggested.as_slice());
            }
        }
        // zero-sum embedding: u_0 = -u_1 pointwise in expectation terms
        for round in &run.rounds {
            let u0 = &round[0].true_utility;
            let u1 = &round[1].true_utility;
            let v0: f64 = round[0].played.dot(u0);
            let v1: f64 = round[1].played.dot(u1);
            assert!((v0 + v1).abs() < 1e-12);
        }
    }

    #[test]
    fn general_sum_traces_match_rounds() {
        let game = GeneralSumGame::from_zero_sum(&pennies());
        let run = run_general_sum(
            &game,
            &[Budgets::honest(), Budgets::honest()],
            &mut NoAdversary,
            4,
        )
        .unwrap();
        let traces = run.traces();
        assert_eq!(traces.len(), 2);
        for trace in &traces {
            trace.check_complete().unwrap();
            assert_eq!(trace.rounds(), 4);
        }
    }
}
