//! Named verification suites covering the library's analytic guarantees:
//! exact identities, proved inequalities, lower-bound constructions, and
//! scaling trends, each runnable on demand and all exercised by the
//! acceptance test target.
//!
//! Every suite is self-contained — it builds its own games, runs, and
//! oracles — so a pass means the claim survived an end-to-end recomputation,
//! not a replay of cached numbers.

use crate::adversary::{
    lower_bound_i, lower_bound_ii, mean_abs_sign_sum, Compose, GenericSchedule, NoAdversary,
    PerPlayer, RandomAdversary, ScheduleKind, ScheduleMode,
};
use crate::audit::{
    entropy_rvu_audit, logbarrier_rvu_audit, lr_diff_check, lr_monotone_check,
    markov_stability_check,
};
use crate::engine::{
    run_general_sum, run_zero_sum, Algorithm, Budgets, GeneralSumGame, GeneralSumRun, ZeroSumGame,
    ZeroSumRun,
};
use crate::entropy::ENTROPY_LR_CAP;
use crate::error::Result;
use crate::logbarrier::{expert_lr_cap, grid_argmax, logbarrier_argmax};
use crate::metrics::{
    ce_gap, external_regret, four_variant_report, nash_gap, swap_regret, swap_regret_against,
    Variant,
};
use crate::rng::Stream;
use crate::simplex::{lp_distance, Norm, SimplexVector};
use crate::swap::{stationary_distribution, TransitionMatrix};

/// Outcome of one verification criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CriterionResult { name, passed, detail }
    }
}

/// All suite names, in execution order.
pub const SUITE_NAMES: [&str; 12] = [
    "stationary-residual",
    "reduction-identity",
    "logbarrier-solver",
    "regret-relations",
    "equilibrium-gaps",
    "forced-vertex-floor",
    "rademacher-scaling",
    "honest-flatness",
    "markov-stability",
    "learning-rate-laws",
    "rvu-audits",
    "corruption-adaptivity",
];

/// Runs one suite by name.
pub fn run_suite(name: &str) -> Option<Result<CriterionResult>> {
    Some(match name {
        "stationary-residual" => stationary_residual(),
        "reduction-identity" => reduction_identity(),
        "logbarrier-solver" => logbarrier_solver(),
        "regret-relations" => regret_relations(),
        "equilibrium-gaps" => equilibrium_gaps(),
        "forced-vertex-floor" => forced_vertex_floor(),
        "rademacher-scaling" => rademacher_scaling(),
        "honest-flatness" => honest_flatness(),
        "markov-stability" => markov_stability(),
        "learning-rate-laws" => learning_rate_laws(),
        "rvu-audits" => rvu_audits(),
        "corruption-adaptivity" => corruption_adaptivity(),
        _ => return None,
    })
}

/// Runs every suite in order.
pub fn run_all() -> Result<Vec<CriterionResult>> {
    SUITE_NAMES
        .iter()
        .map(|name| run_suite(name).expect("name from the fixed list"))
        .collect()
}

fn random_simplex(rng: &mut Stream, m: usize) -> SimplexVector {
    let raw: Vec<f64> = (0..m).map(|_| rng.next_f64() + 1e-4).collect();
    let sum: f64 = raw.iter().sum();
    SimplexVector::validate(raw.iter().map(|x| x / sum).collect(), 1e-9).unwrap()
}

fn random_zero_sum(rng: &mut Stream, mx: usize, my: usize) -> ZeroSumGame {
    let payoff: Vec<Vec<f64>> = (0..mx)
        .map(|_| (0..my).map(|_| rng.next_range(-1.0, 1.0)).collect())
        .collect();
    ZeroSumGame::new(payoff).unwrap()
}

fn random_general_sum(rng: &mut Stream, action_counts: Vec<usize>) -> GeneralSumGame {
    let joint: usize = action_counts.iter().product();
    let utilities: Vec<Vec<f64>> = (0..action_counts.len())
        .map(|_| (0..joint).map(|_| rng.next_range(-1.0, 1.0)).collect())
        .collect();
    GeneralSumGame::new(action_counts, utilities).unwrap()
}

/// Zero-sum run under random (range-preserving) corruption for both players.
fn random_corrupted_zero_sum(
    rng: &mut Stream,
    horizon: usize,
) -> Result<(ZeroSumGame, ZeroSumRun)> {
    let mx = 2 + rng.next_below(3);
    let my = 2 + rng.next_below(3);
    let game = random_zero_sum(rng, mx, my);
    let budgets = [
        Budgets::new(rng.next_range(0.0, 10.0), rng.next_range(0.0, 10.0)),
        Budgets::new(rng.next_range(0.0, 10.0), rng.next_range(0.0, 10.0)),
    ];
    let mut adversary = PerPlayer::new(vec![
        Box::new(RandomAdversary::new(0, rng.next_u64(), 0.4, 0.4, 0.6)),
        Box::new(RandomAdversary::new(1, rng.next_u64(), 0.4, 0.4, 0.6)),
    ]);
    let run = run_zero_sum(
        &game,
        Algorithm::AdaptiveEntropy,
        Algorithm::AdaptiveEntropy,
        &budgets,
        &mut adversary,
        horizon,
    )?;
    Ok((game, run))
}

/// Criterion: stationary distributions of 1000 random row-stochastic
/// matrices (m up to 32) satisfy the 1e-8 residual contract.
pub fn stationary_residual() -> Result<CriterionResult> {
    let mut rng = Stream::derive(0xACC, &[1]);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m = 2 + rng.next_below(31);
        let rows: Vec<SimplexVector> = (0..m).map(|_| random_simplex(&mut rng, m)).collect();
        let q = TransitionMatrix::new(rows)?;
        let x = stationary_distribution(&q, 1e-10)?;
        worst = worst.max(q.stationarity_residual(&x));
    }
    Ok(CriterionResult::new(
        "stationary-residual",
        worst <= 1e-8,
        format!("worst residual {worst:.2e} over 1000 matrices (limit 1e-8)"),
    ))
}

/// Criterion: the swap-to-experts reduction identity. For any fixed remap
/// `M`, the suggestion-weighted swap regret on observed utilities equals the
/// sum over experts of their external regret against row `M(a, .)` on the
/// scaled feedback, up to stationarity round-off.
pub fn reduction_identity() -> Result<CriterionResult> {
    let mut rng = Stream::derive(0xACC, &[2]);
    let mut worst = 0.0f64;
    for run_idx in 0..100 {
        let n = 2 + rng.next_below(2);
        let counts: Vec<usize> = (0..n).map(|_| 2 + rng.next_below(4)).collect();
        let game = random_general_sum(&mut rng, counts.clone());
        let horizon = if run_idx < 90 { 40 } else { 200 };
        let budgets: Vec<Budgets> = (0..n)
            .map(|_| Budgets::new(rng.next_range(0.0, 4.0), rng.next_range(0.0, 4.0)))
            .collect();
        let mut adversary = PerPlayer::new(
            (0..n)
                .map(|i| {
                    Box::new(RandomAdversary::new(i, rng.next_u64(), 0.3, 0.3, 0.5))
                        as Box<dyn crate::adversary::Adversary>
                })
                .collect(),
        );
        let run = run_general_sum(&game, &budgets, &mut adversary, horizon)?;

        for i in 0..n {
            let m = counts[i];
            let suggested: Vec<SimplexVector> =
                run.rounds.iter().map(|r| r[i].suggested.clone()).collect();
            let observed: Vec<Vec<f64>> =
                run.rounds.iter().map(|r| r[i].observed_utility.clone()).collect();
            for _ in 0..10 {
                let remap: Vec<SimplexVector> =
                    (0..m).map(|_| random_simplex(&mut rng, m)).collect();
                let lhs = swap_regret_against(&suggested, &observed, &remap)?;
                // per-expert regret against the fixed comparator M(a, .)
                let mut rhs = 0.0;
                for a in 0..m {
                    for (t, round) in run.rounds.iter().enumerate() {
                        let weight = suggested[t][a];
                        let scaled: Vec<f64> = observed[t].iter().map(|u| weight * u).collect();
                        rhs += remap[a].dot(&scaled) - round[i].expert_rows[a].dot(&scaled);
                    }
                }
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    Ok(CriterionResult::new(
        "reduction-identity",
        worst <= 1e-8,
        format!("worst identity gap {worst:.2e} over 100 runs x 10 remaps (limit 1e-8)"),
    ))
}

/// Criterion: the log-barrier argmax solver. KKT residuals on 10^4 random
/// instances, the hand-solved golden-ratio instance, and agreement with the
/// exhaustive lattice oracle on 200 instances.
pub fn logbarrier_solver() -> Result<CriterionResult> {
    let mut rng = Stream::derive(0xACC, &[3]);
    // the solver itself rejects any solution with KKT residual > 1e-10
    for _ in 0..10_000 {
        let m = 2 + rng.next_below(9);
        let w: Vec<f64> = (0..m).map(|_| rng.next_range(-5.0, 5.0)).collect();
        let eta = rng.next_range(1e-3, 5.0);
        logbarrier_argmax(&w, eta)?;
    }

    let golden = logbarrier_argmax(&[1.0, 0.0], 1.0)?;
    let lambda = (3.0 + 5f64.sqrt()) / 2.0;
    let golden_err =
        (golden[0] - 1.0 / (lambda - 1.0)).abs().max((golden[1] - 1.0 / lambda).abs());

    let mut worst_grid = 0.0f64;
    for _ in 0..200 {
        let m = 2 + rng.next_below(3);
        let w: Vec<f64> = (0..m).map(|_| rng.next_range(-2.0, 2.0)).collect();
        let eta = rng.next_range(0.05, 2.0);
        let y = logbarrier_argmax(&w, eta)?;
        let oracle = grid_argmax(&w, eta, 1e-3);
        worst_grid = worst_grid.max(lp_distance(y.as_slice(), &oracle, Norm::LInf)?);
    }

    let passed = golden_err <= 1e-8 && worst_grid <= 2e-3;
    Ok(CriterionResult::new(
        "logbarrier-solver",
        passed,
        format!(
            "10^4 instances within KKT tolerance; golden-ratio error {golden_err:.2e} \
             (limit 1e-8); worst grid-oracle gap {worst_grid:.2e} (limit 2e-3)"
        ),
    ))
}

/// Criterion: the eight regret-relation inequalities between the four
/// (played | suggested) x (true | observed) variants, with the ledgered
/// corruption spends as budgets.
pub fn regret_relations() -> Result<CriterionResult> {
    let mut rng = Stream::derive(0xACC, &[4]);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let (_, run) = random_corrupted_zero_sum(&mut rng, 100)?;
        let traces = run.traces();
        let report = four_variant_report(&traces)?;
        for player in 0..2 {
            let c_hat = run.ledger.players[player].strategy_spent;
            let c_tilde = run.ledger.players[player].utility_spent;
            let e = |v| report.external(player, v);
            let s = |v| report.swap(player, v);
            use Variant::*;
            let checks = [
                ((e(PlayedTrue) - e(SuggestedTrue)).abs(), c_hat),
                ((e(PlayedObserved) - e(SuggestedObserved)).abs(), c_hat),
                ((e(PlayedTrue) - e(PlayedObserved)).abs(), 2.0 * c_tilde),
                ((e(SuggestedTrue) - e(SuggestedObserved)).abs(), 2.0 * c_tilde),
                ((s(PlayedTrue) - s(SuggestedTrue)).abs(), 2.0 * c_hat),
                ((s(PlayedObserved) - s(SuggestedObserved)).abs(), 2.0 * c_hat),
                ((s(PlayedTrue) - s(PlayedObserved)).abs(), 2.0 * c_tilde),
                ((s(SuggestedTrue) - s(SuggestedObserved)).abs(), 2.0 * c_tilde),
            ];
            for (gap, budget) in checks {
                worst = worst.max(gap - budget);
            }
        }
    }
    Ok(CriterionResult::new(
        "regret-relations",
        worst <= 1e-9,
        format!("worst inequality excess {worst:.2e} over 50 runs x 8 relations (slack 1e-9)"),
    ))
}

/// Criterion: equilibrium gaps are controlled by average regret. Zero-sum:
/// the exploitability of the average profile is at most the summed external
/// regrets over T. General-sum: the correlated-equilibrium gap equals the
/// worst per-player swap regret over T.
pub fn equilibrium_gaps() -> Result<CriterionResult> {
    let mut rng = Stream::derive(0xACC, &[5]);
    let mut worst_zs = f64::NEG_INFINITY;
    for _ in 0..20 {
        let (game, run) = random_corrupted_zero_sum(&mut rng, 150)?;
        let traces = run.traces();
        let reg_x = external_regret(&traces[0].played, &traces[0].true_utility)?;
        let reg_y = external_regret(&traces[1].played, &traces[1].true_utility)?;
        let (x_bar, y_bar) = run.average_played();
        let gap = nash_gap(game.payoff(), &x_bar, &y_bar)?;
        worst_zs = worst_zs.max(gap - (reg_x + reg_y) / 150.0);
    }

    let mut worst_ce = f64::NEG_INFINITY;
    for _ in 0..10 {
        let n = 2 + rng.next_below(2);
        let counts: Vec<usize> = (0..n).map(|_| 2 + rng.next_below(3)).collect();
        let game = random_general_sum(&mut rng, counts);
        let budgets = vec![Budgets::honest(); n];
        let run = run_general_sum(&game, &budgets, &mut NoAdversary, 60)?;
        let traces = run.traces();
        let gap = ce_gap(&traces)?;
        let max_swap = traces
            .iter()
            .map(|tr| swap_regret(&tr.played, &tr.true_utility).map(|s| s / 60.0))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        worst_ce = worst_ce.max(gap - max_swap - 1e-9).max((gap - max_swap).abs() - 1e-9);
    }

    let passed = worst_zs <= 1e-9 && worst_ce <= 0.0;
    Ok(CriterionResult::new(
        "equilibrium-gaps",
        passed,
        format!(
            "worst nash-gap excess {worst_zs:.2e} over 20 zero-sum runs (slack 1e-9); \
             ce-gap identity holds on 10 general-sum runs"
        ),
    ))
}

/// Criterion: the forced-vertex construction extracts at least half its
/// strategy budget as true-utility regret, exactly.
pub fn forced_vertex_floor() -> Result<CriterionResult> {
    let mut worst_margin = f64::INFINITY;
    for &budget in &[10.0, 100.0, 1000.0] {
        for &m in &[2usize, 5] {
            let (game, mut adversary) = lower_bound_ii(m, budget);
            let horizon = (budget / 2.0) as usize + 50;
            let budgets = [Budgets::new(budget, 0.0), Budgets::honest()];
            let run = run_zero_sum(
                &game,
                Algorithm::AdaptiveEntropy,
                Algorithm::AdaptiveEntropy,
                &budgets,
                &mut adversary,
                horizon,
            )?;
            let traces = run.traces();
            let reg = external_regret(&traces[0].played, &traces[0].true_utility)?;
            worst_margin = worst_margin.min(reg - budget / 2.0);
        }
    }
    Ok(CriterionResult::new(
        "forced-vertex-floor",
        worst_margin >= -1e-9,
        format!("smallest margin over C/2 is {worst_margin:.2e} (needs >= -1e-9)"),
    ))
}

/// Criterion: observed-utility regret under the Rademacher corruption scales
/// like the square root of the budget and clears the Monte-Carlo Khintchine
/// floor.
pub fn rademacher_scaling() -> Result<CriterionResult> {
    let horizon = 1000;
    let seeds = 100;
    let mut means = Vec::new();
    for &budget in &[400.0, 1600.0] {
        let mut total = 0.0;
        for seed in 0..seeds {
            let (game, mut adversary) = lower_bound_i(2, budget, seed as u64);
            let budgets = [Budgets::new(0.0, budget), Budgets::honest()];
            let run = run_zero_sum(
                &game,
                Algorithm::AdaptiveEntropy,
                Algorithm::AdaptiveEntropy,
                &budgets,
                &mut adversary,
                horizon,
            )?;
            let traces = run.traces();
            total += external_regret(&traces[0].played, &traces[0].observed_utility)?;
        }
        means.push(total / seeds as f64);
    }

    let ratio = means[1] / means[0];
    let ratio_ok = (1.6..=2.4).contains(&ratio);
    // Monte-Carlo floor: E |sum of N signs| with N = budget / 2 active rounds
    let mut floor_ok = true;
    let mut floor_detail = Vec::new();
    for (mean, &budget) in means.iter().zip(&[400.0, 1600.0]) {
        let mc = mean_abs_sign_sum((budget / 2.0) as usize, 4000, 0xF100);
        floor_ok &= *mean >= 0.95 * mc;
        floor_detail.push(format!("mean {mean:.1} vs floor {:.1}", 0.95 * mc));
    }
    Ok(CriterionResult::new(
        "rademacher-scaling",
        ratio_ok && floor_ok,
        format!(
            "budget-quadrupling regret ratio {ratio:.3} (target [1.6, 2.4]); {}",
            floor_detail.join("; ")
        ),
    ))
}

/// Criterion: honest self-play regret is flat in T (polylog, not square
/// root), and adaptive optimism beats fixed-rate Hedge on almost all games.
pub fn honest_flatness() -> Result<CriterionResult> {
    let mut rng = Stream::derive(0xACC, &[8]);
    let honest = [Budgets::honest(), Budgets::honest()];
    let mut worst_ratio = f64::NEG_INFINITY;
    let mut wins = 0;
    for _ in 0..20 {
        let game = random_zero_sum(&mut rng, 10, 10);
        let reg_at = |game: &ZeroSumGame, t: usize| -> Result<f64> {
            let run = run_zero_sum(
                game,
                Algorithm::AdaptiveEntropy,
                Algorithm::AdaptiveEntropy,
                &honest,
                &mut NoAdversary,
                t,
            )?;
            let traces = run.traces();
            external_regret(&traces[0].played, &traces[0].true_utility)
        };
        let reg_short = reg_at(&game, 1000)?;
        let reg_long = reg_at(&game, 10_000)?;
        worst_ratio = worst_ratio.max(reg_long / reg_short);

        let hedge_rate = (10f64.ln() / 10_000.0).sqrt();
        let hedge_run = run_zero_sum(
            &game,
            Algorithm::Hedge { rate: hedge_rate },
            Algorithm::Hedge { rate: hedge_rate },
            &honest,
            &mut NoAdversary,
            10_000,
        )?;
        let hedge_traces = hedge_run.traces();
        let hedge_reg =
            external_regret(&hedge_traces[0].played, &hedge_traces[0].true_utility)?;
        if reg_long <= hedge_reg {
            wins += 1;
        }
    }
    let passed = worst_ratio <= 2.0 && wins >= 18;
    Ok(CriterionResult::new(
        "honest-flatness",
        passed,
        format!(
            "worst Reg(10^4)/Reg(10^3) ratio {worst_ratio:.3} (limit 2); \
             adaptive beat Hedge on {wins}/20 games (needs 18)"
        ),
    ))
}

fn stability_runs() -> Result<Vec<(usize, GeneralSumRun)>> {
    let mut rng = Stream::derive(0xACC, &[9]);
    let shapes: [&[usize]; 3] = [&[8, 8], &[4, 4, 4], &[3, 3, 3, 3]];
    let horizon = 1000;
    shapes
        .iter()
        .map(|&shape| {
            let game = random_general_sum(&mut rng, shape.to_vec());
            let budgets = vec![Budgets::honest(); shape.len()];
            let run = run_general_sum(&game, &budgets, &mut NoAdversary, horizon)?;
            Ok((horizon, run))
        })
        .collect()
}

/// Criterion: in honest general-sum runs the chain never destabilizes — the
/// per-round `sum_a mu_a <= 1/2` precondition holds throughout and the
/// stationary distribution's movement obeys both movement bounds.
pub fn markov_stability() -> Result<CriterionResult> {
    let mut all_stable = true;
    let mut worst = f64::NEG_INFINITY;
    for (_, run) in stability_runs()? {
        all_stable &= run.stability_flags.iter().all(|&f| f);
        for i in 0..run.players() {
            let suggestions: Vec<SimplexVector> =
                run.rounds.iter().map(|r| r[i].suggested.clone()).collect();
            let mus: Vec<Vec<f64>> =
                run.rounds.iter().map(|r| r[i].stability.mu.clone()).collect();
            let check = markov_stability_check(&suggestions, &mus);
            worst = worst.max(check.max_violation);
            all_stable &= run
                .rounds
                .iter()
                .all(|r| r[i].stability.mu.iter().sum::<f64>() <= 0.5);
        }
    }
    Ok(CriterionResult::new(
        "markov-stability",
        all_stable && worst <= 0.0,
        format!(
            "stability precondition held every round; worst movement-bound violation {worst:.2e}"
        ),
    ))
}

/// Criterion: learning-rate laws — monotone nonincreasing, capped, and the
/// round-to-round inverse-rate increments bounded by suggestion weights.
pub fn learning_rate_laws() -> Result<CriterionResult> {
    // entropy rates on corrupted zero-sum runs
    let mut rng = Stream::derive(0xACC, &[10]);
    let mut ok = true;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10 {
        let (_, run) = random_corrupted_zero_sum(&mut rng, 150)?;
        let mut rates_x: Vec<f64> = run.rounds.iter().map(|r| r.eta_x).collect();
        rates_x.push(run.final_eta_x);
        let check = lr_monotone_check(&rates_x, ENTROPY_LR_CAP);
        ok &= check.satisfied;
        worst = worst.max(check.max_violation);
    }

    // expert rates and the increment law on honest general-sum runs
    let mut rng2 = Stream::derive(0xACC, &[11]);
    for _ in 0..5 {
        let n = 2 + rng2.next_below(2);
        let counts: Vec<usize> = (0..n).map(|_| 2 + rng2.next_below(3)).collect();
        let game = random_general_sum(&mut rng2, counts.clone());
        let horizon = 120;
        let run =
            run_general_sum(&game, &vec![Budgets::honest(); n], &mut NoAdversary, horizon)?;
        for i in 0..n {
            let m = counts[i];
            let cap = expert_lr_cap(n, m);
            for a in 0..m {
                let mut rates: Vec<f64> =
                    run.rounds.iter().map(|r| r[i].expert_rates[a]).collect();
                rates.push(run.final_rates[i][a]);
                let mono = lr_monotone_check(&rates, cap);
                ok &= mono.satisfied;
                worst = worst.max(mono.max_violation);
                let weights: Vec<f64> = run.rounds.iter().map(|r| r[i].suggested[a]).collect();
                let diff = lr_diff_check(&weights, &rates, m, horizon);
                ok &= diff.satisfied;
                worst = worst.max(diff.max_violation);
            }
        }
    }
    Ok(CriterionResult::new(
        "learning-rate-laws",
        ok,
        format!("worst law violation {worst:.2e} across monotone/cap/increment checks"),
    ))
}

/// Criterion: realized regret never exceeds the RVU right-hand sides — the
/// entropy bound on zero-sum runs (honest and corrupted), the log-barrier
/// bound per expert on honest general-sum runs, gated on chain stability.
pub fn rvu_audits() -> Result<CriterionResult> {
    let mut rng = Stream::derive(0xACC, &[12]);
    let mut ok = true;
    let mut worst = f64::NEG_INFINITY;

    for run_idx in 0..10 {
        let run = if run_idx < 5 {
            let mx = 2 + rng.next_below(4);
            let my = 2 + rng.next_below(4);
            let game = random_zero_sum(&mut rng, mx, my);
            run_zero_sum(
                &game,
                Algorithm::AdaptiveEntropy,
                Algorithm::AdaptiveEntropy,
                &[Budgets::honest(), Budgets::honest()],
                &mut NoAdversary,
                200,
            )?
        } else {
            random_corrupted_zero_sum(&mut rng, 200)?.1
        };
        let traces = run.traces();
        for (player, trace) in traces.iter().enumerate() {
            let rates: Vec<f64> = run
                .rounds
                .iter()
                .map(|r| if player == 0 { r.eta_x } else { r.eta_y })
                .collect();
            let (final_s, final_rate) = if player == 0 {
                (&run.final_x, run.final_eta_x)
            } else {
                (&run.final_y, run.final_eta_y)
            };
            let audit = entropy_rvu_audit(
                &trace.suggested,
                final_s,
                &trace.observed_utility,
                &rates,
                final_rate,
            )?;
            ok &= audit.satisfied;
            worst = worst.max(audit.regret - audit.bound);
        }
    }

    let mut gated = 0;
    let mut rng2 = Stream::derive(0xACC, &[13]);
    for _ in 0..3 {
        let n = 2;
        let counts = vec![2 + rng2.next_below(3), 2 + rng2.next_below(3)];
        let game = random_general_sum(&mut rng2, counts.clone());
        let horizon = 150;
        let run =
            run_general_sum(&game, &vec![Budgets::honest(); n], &mut NoAdversary, horizon)?;
        for i in 0..n {
            if !run.stability_flags[i] {
                gated += 1;
                continue;
            }
            for a in 0..counts[i] {
                let steps: Vec<SimplexVector> =
                    run.rounds.iter().map(|r| r[i].expert_rows[a].clone()).collect();
                let scaled: Vec<Vec<f64>> = run
                    .rounds
                    .iter()
                    .map(|r| {
                        let w = r[i].suggested[a];
                        r[i].observed_utility.iter().map(|u| w * u).collect()
                    })
                    .collect();
                let rates: Vec<f64> =
                    run.rounds.iter().map(|r| r[i].expert_rates[a]).collect();
                let audit = logbarrier_rvu_audit(
                    &steps,
                    &run.final_rows[i][a],
                    &scaled,
                    &rates,
                    run.final_rates[i][a],
                    horizon,
                )?;
                ok &= audit.satisfied;
                if audit.applicable {
                    worst = worst.max(audit.regret - audit.bound);
                } else {
                    gated += 1;
                }
            }
        }
    }
    Ok(CriterionResult::new(
        "rvu-audits",
        ok,
        format!("worst regret-minus-bound {worst:.2e} (slack 1e-9); {gated} audits gated off"),
    ))
}

/// Criterion: more corruption budget buys proportionally more regret. Mean
/// final true-utility regret under frontloaded strategy corruption is
/// nondecreasing in the budget, with a roughly additive increment.
pub fn corruption_adaptivity() -> Result<CriterionResult> {
    let budgets_axis = [0.0, 50.0, 200.0, 800.0];
    let game = lower_bound_ii(2, 0.0).0;
    let horizon = 600;
    let seeds = 10;
    let mut means = Vec::new();
    for &budget in &budgets_axis {
        let mut total = 0.0;
        for seed in 0..seeds {
            // seeded low-amplitude observation noise keeps runs distinct
            let schedule: Box<dyn crate::adversary::Adversary> = Box::new(GenericSchedule::new(
                0,
                ScheduleKind::Frontloaded,
                ScheduleMode::Strategy { target_action: 1 },
                budget,
                horizon,
            ));
            let noise: Box<dyn crate::adversary::Adversary> =
                Box::new(RandomAdversary::new(0, seed as u64, 0.0, 0.3, 0.05));
            let mut adversary = Compose::new(vec![schedule, noise]);
            let run_budgets = [Budgets::new(budget, 5.0), Budgets::honest()];
            let run = run_zero_sum(
                &game,
                Algorithm::AdaptiveEntropy,
                Algorithm::AdaptiveEntropy,
                &run_budgets,
                &mut adversary,
                horizon,
            )?;
            let traces = run.traces();
            total += external_regret(&traces[0].played, &traces[0].true_utility)?;
        }
        means.push(total / seeds as f64);
    }
    let nondecreasing = means.windows(2).all(|w| w[1] >= w[0] - 1e-9);
    let inc_small = means[2] - means[1];
    let inc_large = means[3] - means[2];
    let additive_ok = inc_large >= 0.9 * inc_small;
    Ok(CriterionResult::new(
        "corruption-adaptivity",
        nondecreasing && additive_ok,
        format!(
            "mean regrets {:.2?} over budgets {:?}; increments {:.1} then {:.1}",
            means, budgets_axis, inc_small, inc_large
        ),
    ))
}
