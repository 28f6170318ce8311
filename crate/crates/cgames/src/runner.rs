//! Run execution and deterministic CSV / JSON emission.

use corrupted_games::engine::{run_general_sum, run_zero_sum};
use corrupted_games::metrics::{four_variant_report, nash_gap, PlayerTrace};
use corrupted_games::simplex::SimplexVector;
use corrupted_games::Result;
use serde_json::json;

use crate::config::RunConfig;

/// One CSV row: a player's running state after round `t`, or the final
/// summary (`row_type = "summary"`, one per player).
pub struct Row {
    pub row_type: &'static str,
    pub t: usize,
    pub player: usize,
    /// External regret so far, (played|suggested) x (true|observed).
    pub ext: [f64; 4],
    /// Swap regret so far, same variant order.
    pub swap: [f64; 4],
    pub learning_rate: f64,
    pub strategy_spent: f64,
    pub utility_spent: f64,
    pub stable: bool,
    /// Running equilibrium gap: exploitability of the averaged profile
    /// (zero-sum) or best swap deviation over `t` (general-sum).
    pub gap: f64,
}

pub const CSV_HEADER: &str = "row_type,t,player,ext_played_true,ext_suggested_true,\
ext_played_observed,ext_suggested_observed,swap_played_true,swap_suggested_true,\
swap_played_observed,swap_suggested_observed,learning_rate,strategy_spent,utility_spent,\
stable,gap";

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.row_type,
            r.t,
            r.player,
            r.ext[0],
            r.ext[1],
            r.ext[2],
            r.ext[3],
            r.swap[0],
            r.swap[1],
            r.swap[2],
            r.swap[3],
            r.learning_rate,
            r.strategy_spent,
            r.utility_spent,
            u8::from(r.stable),
            r.gap,
        ));
    }
    out
}

/// Incremental regret state of one player for one variant.
struct VariantState {
    cumulative: Vec<f64>,
    earned: f64,
    gains: Vec<Vec<f64>>,
}

impl VariantState {
    fn new(m: usize) -> Self {
        VariantState { cumulative: vec![0.0; m], earned: 0.0, gains: vec![vec![0.0; m]; m] }
    }

    fn push(&mut self, play: &SimplexVector, utility: &[f64]) {
        let m = utility.len();
        for k in 0..m {
            self.cumulative[k] += utility[k];
        }
        self.earned += play.dot(utility);
        for a in 0..m {
            let xa = play[a];
            for b in 0..m {
                self.gains[a][b] += xa * utility[b];
            }
        }
    }

    fn external(&self) -> f64 {
        let best = self.cumulative.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        best - self.earned
    }

    fn swap(&self) -> f64 {
        self.gains
            .iter()
            .enumerate()
            .map(|(a, row)| row.iter().fold(f64::NEG_INFINITY, |acc, &g| acc.max(g)) - row[a])
            .sum()
    }
}

struct PlayerState {
    variants: [VariantState; 4],
    strategy_spent: f64,
    utility_spent: f64,
}

impl PlayerState {
    fn new(m: usize) -> Self {
        PlayerState {
            variants: std::array::from_fn(|_| VariantState::new(m)),
            strategy_spent: 0.0,
            utility_spent: 0.0,
        }
    }

    fn push_round(&mut self, trace: &PlayerTrace, t: usize) {
        let suggested = &trace.suggested[t];
        let played = &trace.played[t];
        let true_u = &trace.true_utility[t];
        let observed_u = &trace.observed_utility[t];
        self.variants[0].push(played, true_u);
        self.variants[1].push(suggested, true_u);
        self.variants[2].push(played, observed_u);
        self.variants[3].push(suggested, observed_u);
        self.strategy_spent += played
            .as_slice()
            .iter()
            .zip(suggested.as_slice())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>();
        self.utility_spent += observed_u
            .iter()
            .zip(true_u)
            .fold(0.0f64, |acc, (o, u)| acc.max((o - u).abs()));
    }

    fn ext(&self) -> [f64; 4] {
        std::array::from_fn(|k| self.variants[k].external())
    }

    fn swap(&self) -> [f64; 4] {
        std::array::from_fn(|k| self.variants[k].swap())
    }
}

/// Executes a run described by `config` (with optional seed override) and
/// returns the CSV rows plus the JSON report.
pub fn execute(config: &RunConfig, seed_override: Option<u64>) -> Result<(Vec<Row>, serde_json::Value)> {
    let seed = seed_override.unwrap_or(config.seed);
    if config.is_general_sum() {
        execute_general_sum(config, seed)
    } else {
        execute_zero_sum(config, seed)
    }
}

fn rows_from_traces(
    traces: &[PlayerTrace],
    rates: &[Vec<f64>],
    stable: &[Vec<bool>],
    gap_fn: &mut dyn FnMut(usize, &[PlayerState], &[PlayerTrace]) -> f64,
) -> Vec<Row> {
    let n = traces.len();
    let horizon = traces[0].rounds();
    let mut states: Vec<PlayerState> =
        traces.iter().map(|tr| PlayerState::new(tr.suggested[0].dim())).collect();
    let mut rows = Vec::with_capacity(n * (horizon + 1));
    for t in 0..horizon {
        for i in 0..n {
            states[i].push_round(&traces[i], t);
        }
        let gap = gap_fn(t, &states, traces);
        for (i, st) in states.iter().enumerate() {
            rows.push(Row {
                row_type: "round",
                t: t + 1,
                player: i,
                ext: st.ext(),
                swap: st.swap(),
                learning_rate: rates[t][i],
                strategy_spent: st.strategy_spent,
                utility_spent: st.utility_spent,
                stable: stable[t][i],
                gap,
            });
        }
    }
    let final_gap = gap_fn(horizon - 1, &states, traces);
    for (i, st) in states.iter().enumerate() {
        rows.push(Row {
            row_type: "summary",
            t: horizon,
            player: i,
            ext: st.ext(),
            swap: st.swap(),
            learning_rate: rates[horizon - 1][i],
            strategy_spent: st.strategy_spent,
            utility_spent: st.utility_spent,
            stable: stable[horizon - 1][i],
            gap: final_gap,
        });
    }
    rows
}

fn execute_zero_sum(config: &RunConfig, seed: u64) -> Result<(Vec<Row>, serde_json::Value)> {
    let game = config.zero_sum_game(seed)?;
    let (algo_x, algo_y) = config.matrix_algorithms()?;
    let budgets_vec = config.budgets();
    if budgets_vec.len() != 2 {
        return Err(corrupted_games::Error::Config(
            "zero-sum runs take exactly two player specs".into(),
        ));
    }
    let budgets = [budgets_vec[0], budgets_vec[1]];
    let mut adversary = config.adversary(seed);
    let run = run_zero_sum(&game, algo_x, algo_y, &budgets, &mut adversary, config.horizon)?;
    let traces = run.traces().to_vec();
    let rates: Vec<Vec<f64>> = run.rounds.iter().map(|r| vec![r.eta_x, r.eta_y]).collect();
    let stable = vec![vec![true, true]; config.horizon];

    // running average played strategies for the exploitability column
    let mut sum_x = vec![0.0; game.rows()];
    let mut sum_y = vec![0.0; game.cols()];
    let mut round_idx = 0usize;
    let payoff = game.payoff().to_vec();
    let rounds = run.rounds.clone();
    let mut gap_fn = move |t: usize, _: &[PlayerState], _: &[PlayerTrace]| -> f64 {
        while round_idx <= t {
            for (k, v) in sum_x.iter_mut().enumerate() {
                *v += rounds[round_idx].x_played[k];
            }
            for (k, v) in sum_y.iter_mut().enumerate() {
                *v += rounds[round_idx].y_played[k];
            }
            round_idx += 1;
        }
        let tt = round_idx as f64;
        let x_bar = SimplexVector::validate(sum_x.iter().map(|v| v / tt).collect(), 1e-9).expect("average of simplex points");
        let y_bar = SimplexVector::validate(sum_y.iter().map(|v| v / tt).collect(), 1e-9).expect("average of simplex points");
        nash_gap(&payoff, &x_bar, &y_bar).expect("dims fixed by game")
    };
    let rows = rows_from_traces(&traces, &rates, &stable, &mut gap_fn);

    let report = four_variant_report(&traces)?;
    let (x_bar, y_bar) = run.average_played();
    let final_gap = nash_gap(game.payoff(), &x_bar, &y_bar)?;
    let json = json!({
        "schema": crate::config::SCHEMA_VERSION,
        "mode": "zero_sum",
        "seed": seed,
        "horizon": config.horizon,
        "regret": report,
        "nash_gap": final_gap,
        "ledger": run.ledger,
        "composite_corruption": run.ledger.players.iter().map(|p| json!({
            "general_sum": p.composite_general_sum(),
            "zero_sum": p.composite_zero_sum(),
        })).collect::<Vec<_>>(),
    });
    Ok((rows, json))
}

fn execute_general_sum(config: &RunConfig, seed: u64) -> Result<(Vec<Row>, serde_json::Value)> {
    let game = config.general_sum_game(seed)?;
    let budgets = config.budgets();
    if budgets.len() != game.players() {
        return Err(corrupted_games::Error::Config(format!(
            "game has {} players but {} player specs given",
            game.players(),
            budgets.len()
        )));
    }
    let mut adversary = config.adversary(seed);
    let run = run_general_sum(&game, &budgets, &mut adversary, config.horizon)?;
    let traces = run.traces();
    // per-player rate column: the tightest (smallest) expert rate
    let rates: Vec<Vec<f64>> = run
        .rounds
        .iter()
        .map(|r| {
            r.iter()
                .map(|p| p.expert_rates.iter().cloned().fold(f64::INFINITY, f64::min))
                .collect()
        })
        .collect();
    let stable: Vec<Vec<bool>> = run
        .rounds
        .iter()
        .map(|r| r.iter().map(|p| p.stability.stable).collect())
        .collect();

    // running ce gap = max_i swap(played, true) / rounds so far, straight
    // from the incremental swap state (variant 0)
    let mut gap_fn = |t: usize, states: &[PlayerState], _: &[PlayerTrace]| -> f64 {
        states
            .iter()
            .map(|st| st.variants[0].swap() / (t + 1) as f64)
            .fold(0.0f64, f64::max)
    };
    let rows = rows_from_traces(&traces, &rates, &stable, &mut gap_fn);
    let final_gap = rows.last().map(|r| r.gap).unwrap_or(0.0);

    let report = four_variant_report(&traces)?;
    let json = json!({
        "schema": crate::config::SCHEMA_VERSION,
        "mode": "general_sum",
        "seed": seed,
        "horizon": config.horizon,
        "regret": report,
        "ce_gap": final_gap,
        "stability_flags": run.stability_flags,
        "ledger": run.ledger,
        "composite_corruption": run.ledger.players.iter().map(|p| json!({
            "general_sum": p.composite_general_sum(),
            "zero_sum": p.composite_zero_sum(),
        })).collect::<Vec<_>>(),
    });
    Ok((rows, json))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn honest_zero_sum(horizon: usize) -> RunConfig {
        RunConfig::parse(&format!(
            r#"{{
                "schema": 1,
                "seed": 7,
                "horizon": {horizon},
                "game": {{"kind": "zero_sum", "payoff": [[1.0, -1.0], [-1.0, 1.0]]}},
                "algorithms": [{{"kind": "entropy_oftrl"}}, {{"kind": "entropy_oftrl"}}],
                "players": [{{}}, {{}}]
            }}"#
        ))
        .expect("valid config")
    }

    #[test]
    fn csv_has_one_round_row_per_player_per_round_plus_summaries() {
        let cfg = honest_zero_sum(10);
        let (rows, _) = execute(&cfg, None).unwrap();
        let round_rows = rows.iter().filter(|r| r.row_type == "round").count();
        let summary_rows = rows.iter().filter(|r| r.row_type == "summary").count();
        assert_eq!(round_rows, 10 * 2);
        assert_eq!(summary_rows, 2);
        let csv = to_csv(&rows);
        assert_eq!(csv.lines().count(), 1 + 10 * 2 + 2);
        assert!(csv.starts_with(CSV_HEADER));
    }

    #[test]
    fn identical_config_and_seed_give_byte_identical_csv() {
        let cfg = honest_zero_sum(25);
        let (rows_a, report_a) = execute(&cfg, None).unwrap();
        let (rows_b, report_b) = execute(&cfg, None).unwrap();
        assert_eq!(to_csv(&rows_a), to_csv(&rows_b));
        assert_eq!(report_a, report_b);
    }

    #[test]
    fn seed_override_changes_random_games_deterministically() {
        let cfg = RunConfig::parse(
            r#"{
                "schema": 1,
                "seed": 3,
                "horizon": 15,
                "game": {"kind": "random_zero_sum", "rows": 3, "cols": 4},
                "algorithms": [{"kind": "entropy_oftrl"}, {"kind": "hedge", "rate": 0.1}],
                "players": [{}, {}]
            }"#,
        )
        .unwrap();
        let (a, _) = execute(&cfg, Some(99)).unwrap();
        let (b, _) = execute(&cfg, Some(99)).unwrap();
        let (c, _) = execute(&cfg, Some(100)).unwrap();
        assert_eq!(to_csv(&a), to_csv(&b));
        assert_ne!(to_csv(&a), to_csv(&c));
    }

    #[test]
    fn general_sum_runs_report_ce_gap_and_stability() {
        let cfg = RunConfig::parse(
            r#"{
                "schema": 1,
                "seed": 5,
                "horizon": 20,
                "game": {"kind": "random_general_sum", "action_counts": [2, 3]},
                "players": [{}, {}]
            }"#,
        )
        .unwrap();
        assert!(cfg.is_general_sum());
        let (rows, report) = execute(&cfg, None).unwrap();
        assert_eq!(rows.len(), 2 * 21);
        assert!(report["ce_gap"].as_f64().unwrap().is_finite());
        assert_eq!(report["stability_flags"].as_array().unwrap().len(), 2);
    }
}
