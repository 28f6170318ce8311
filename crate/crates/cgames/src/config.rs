//! JSON configuration schema (version 1) for runs and sweeps.

use corrupted_games::adversary::{
    Adversary, ColumnRademacher, ForcedVertex, GenericSchedule, NoAdversary, PerPlayer,
    RandomAdversary, ScheduleKind, ScheduleMode, UtilityRademacher,
};
use corrupted_games::engine::{Algorithm, Budgets, GeneralSumGame, ZeroSumGame};
use corrupted_games::rng::Stream;
use corrupted_games::{Error, Result};
use serde::Deserialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub seed: u64,
    pub horizon: usize,
    pub game: GameSpec,
    /// Per-player algorithm for matrix (zero-sum) games. Omitted or set to
    /// `swap_logbarrier` entries switch the run to the swap learner on the
    /// bimatrix embedding.
    #[serde(default)]
    pub algorithms: Option<Vec<AlgorithmSpec>>,
    pub players: Vec<PlayerSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GameSpec {
    ZeroSum { payoff: Vec<Vec<f64>> },
    RandomZeroSum { rows: usize, cols: usize },
    GeneralSum { action_counts: Vec<usize>, utilities: Vec<Vec<f64>> },
    RandomGeneralSum { action_counts: Vec<usize> },
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    EntropyOftrl,
    Hedge { rate: f64 },
    ConstantOftrl { rate: f64 },
    SwapLogbarrier,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerSpec {
    #[serde(default)]
    pub budgets: BudgetSpec,
    #[serde(default)]
    pub adversary: AdversarySpec,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    #[serde(default)]
    pub strategy: f64,
    #[serde(default)]
    pub utility: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AdversarySpec {
    #[default]
    None,
    /// Push the played strategy toward `target_action` on the given
    /// schedule, spending the strategy budget.
    StrategySchedule { schedule: ScheduleKind, target_action: usize },
    /// Add `pattern` (sup-norm at most 1) to observed utilities on the given
    /// schedule, spending the utility budget.
    UtilitySchedule { schedule: ScheduleKind, pattern: Vec<f64> },
    /// Random range-preserving perturbations of both kinds.
    Random { strategy_prob: f64, utility_prob: f64, max_step: f64 },
    /// Sign-flipping observation corruption on the first two actions.
    RademacherUtility,
    /// Force play to a vertex while the strategy budget lasts.
    ForcedVertex { vertex: usize },
    /// Column-player strategy replacement realizing 1/3-scaled Rademacher
    /// rewards (only meaningful on the 2x3 lower-bound game).
    ColumnRademacher,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if config.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                config.schema
            )));
        }
        if config.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if config.players.is_empty() {
            return Err(Error::Config("need at least one player spec".into()));
        }
        Ok(config)
    }

    /// Whether this run uses swap learners on the (possibly embedded)
    /// general-sum game.
    pub fn is_general_sum(&self) -> bool {
        match &self.game {
            GameSpec::GeneralSum { .. } | GameSpec::RandomGeneralSum { .. } => true,
            GameSpec::ZeroSum { .. } | GameSpec::RandomZeroSum { .. } => match &self.algorithms {
                None => true,
                Some(list) => list.iter().any(|a| *a == AlgorithmSpec::SwapLogbarrier),
            },
        }
    }

    pub fn zero_sum_game(&self, seed: u64) -> Result<ZeroSumGame> {
        match &self.game {
            GameSpec::ZeroSum { payoff } => ZeroSumGame::new(payoff.clone()),
            GameSpec::RandomZeroSum { rows, cols } => {
                let mut rng = Stream::derive(seed, &[0x67616d65]);
                let payoff: Vec<Vec<f64>> = (0..*rows)
                    .map(|_| (0..*cols).map(|_| rng.next_range(-1.0, 1.0)).collect())
                    .collect();
                ZeroSumGame::new(payoff)
            }
            _ => Err(Error::Config("expected a zero-sum game spec".into())),
        }
    }

    pub fn general_sum_game(&self, seed: u64) -> Result<GeneralSumGame> {
        match &self.game {
            GameSpec::GeneralSum { action_counts, utilities } => {
                GeneralSumGame::new(action_counts.clone(), utilities.clone())
            }
            GameSpec::RandomGeneralSum { action_counts } => {
                let mut rng = Stream::derive(seed, &[0x67616d65]);
                let joint: usize = action_counts.iter().product();
                let utilities: Vec<Vec<f64>> = (0..action_counts.len())
                    .map(|_| (0..joint).map(|_| rng.next_range(-1.0, 1.0)).collect())
                    .collect();
                GeneralSumGame::new(action_counts.clone(), utilities)
            }
            GameSpec::ZeroSum { .. } | GameSpec::RandomZeroSum { .. } => {
                Ok(GeneralSumGame::from_zero_sum(&self.zero_sum_game(seed)?))
            }
        }
    }

    pub fn matrix_algorithms(&self) -> Result<(Algorithm, Algorithm)> {
        let specs = self
            .algorithms
            .as_ref()
            .ok_or_else(|| Error::Config("matrix runs need `algorithms`".into()))?;
        if specs.len() != 2 {
            return Err(Error::Config("zero-sum runs take exactly two algorithms".into()));
        }
        let to_algo = |spec: &AlgorithmSpec| -> Result<Algorithm> {
            Ok(match spec {
                AlgorithmSpec::EntropyOftrl => Algorithm::AdaptiveEntropy,
                AlgorithmSpec::Hedge { rate } => Algorithm::Hedge { rate: *rate },
                AlgorithmSpec::ConstantOftrl { rate } => Algorithm::ConstantOftrl { rate: *rate },
                AlgorithmSpec::SwapLogbarrier => {
                    return Err(Error::Config(
                        "swap_logbarrier runs through the general-sum engine".into(),
                    ))
                }
            })
        };
        Ok((to_algo(&specs[0])?, to_algo(&specs[1])?))
    }

    pub fn budgets(&self) -> Vec<Budgets> {
        self.players
            .iter()
            .map(|p| Budgets::new(p.budgets.strategy.max(0.0), p.budgets.utility.max(0.0)))
            .collect()
    }

    /// Builds the per-player adversary stack; per-player seeds are derived
    /// from the master seed so specs never perturb each other's streams.
    pub fn adversary(&self, seed: u64) -> PerPlayer {
        let boxed: Vec<Box<dyn Adversary>> = self
            .players
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let sub = Stream::derive(seed, &[0x61647665, i as u64]).next_u64();
                p.adversary.build(i, &p.budgets, self.horizon, sub)
            })
            .collect();
        PerPlayer::new(boxed)
    }
}

impl AdversarySpec {
    fn build(
        &self,
        player: usize,
        budgets: &BudgetSpec,
        horizon: usize,
        seed: u64,
    ) -> Box<dyn Adversary> {
        match self {
            AdversarySpec::None => Box::new(NoAdversary),
            AdversarySpec::StrategySchedule { schedule, target_action } => {
                Box::new(GenericSchedule::new(
                    player,
                    *schedule,
                    ScheduleMode::Strategy { target_action: *target_action },
                    budgets.strategy,
                    horizon,
                ))
            }
            AdversarySpec::UtilitySchedule { schedule, pattern } => Box::new(GenericSchedule::new(
                player,
                *schedule,
                ScheduleMode::Utility { pattern: pattern.clone() },
                budgets.utility,
                horizon,
            )),
            AdversarySpec::Random { strategy_prob, utility_prob, max_step } => Box::new(
                RandomAdversary::new(player, seed, *strategy_prob, *utility_prob, *max_step),
            ),
            AdversarySpec::RademacherUtility => {
                Box::new(UtilityRademacher::new(player, budgets.utility, seed))
            }
            AdversarySpec::ForcedVertex { vertex } => {
                Box::new(ForcedVertex::new(player, *vertex, budgets.strategy))
            }
            AdversarySpec::ColumnRademacher => {
                Box::new(ColumnRademacher::new(budgets.strategy, seed))
            }
        }
    }
}

/// Sweep axes; the cartesian product of all four is executed. Budget axes
/// override player 0's budgets in the template.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    #[serde(default)]
    pub strategy_budgets: Vec<f64>,
    #[serde(default)]
    pub utility_budgets: Vec<f64>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub horizons: Vec<usize>,
}

impl SweepGrid {
    pub fn parse(text: &str) -> Result<Self> {
        let grid: SweepGrid =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if grid.seeds.is_empty() {
            return Err(Error::Config("sweep grid needs at least one seed".into()));
        }
        Ok(grid)
    }

    /// All grid points as (strategy budget, utility budget, horizon, seed),
    /// with `None` meaning "keep the template's value".
    pub fn points(&self) -> Vec<(Option<f64>, Option<f64>, Option<usize>, u64)> {
        let opt = |v: &Vec<f64>| -> Vec<Option<f64>> {
            if v.is_empty() {
                vec![None]
            } else {
                v.iter().map(|&x| Some(x)).collect()
            }
        };
        let horizons: Vec<Option<usize>> = if self.horizons.is_empty() {
            vec![None]
        } else {
            self.horizons.iter().map(|&h| Some(h)).collect()
        };
        let mut out = Vec::new();
        for &s in &opt(&self.strategy_budgets) {
            for &u in &opt(&self.utility_budgets) {
                for &h in &horizons {
                    for &seed in &self.seeds {
                        out.push((s, u, h, seed));
                    }
                }
            }
        }
        out
    }
}
