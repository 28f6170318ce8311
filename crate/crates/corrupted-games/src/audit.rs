//! Post-hoc audits: regret upper bounds of the RVU form (regret bounded by
//! variation in utilities), learning-rate laws, and Markov-chain stability
//! inequalities, all evaluated on recorded run histories.
//!
//! Each audit recomputes its left-hand side from the raw history with an
//! independent code path, then checks it against the analytic right-hand
//! side at a pinned slack. A failed audit is a finding, not a crash.
//!
//! ```
//! use corrupted_games::adversary::NoAdversary;
//! use corrupted_games::audit::entropy_rvu_audit;
//! use corrupted_games::engine::{run_zero_sum, Algorithm, Budgets, ZeroSumGame};
//!
//! let game = ZeroSumGame::new(vec![vec![0.6, -1.0], vec![-0.4, 0.8]])?;
//! let run = run_zero_sum(
//!     &game,
//!     Algorithm::AdaptiveEntropy,
//!     Algorithm::AdaptiveEntropy,
//!     &[Budgets::honest(), Budgets::honest()],
//!     &mut NoAdversary,
//!     80,
//! )?;
//! let traces = run.traces();
//! let rates: Vec<f64> = run.rounds.iter().map(|r| r.eta_x).collect();
//! let audit = entropy_rvu_audit(
//!     &traces[0].suggested,
//!     &run.final_x,
//!     &traces[0].observed_utility,
//!     &rates,
//!     run.final_eta_x,
//! )?;
//! assert!(audit.satisfied && audit.regret <= audit.bound);
//! # Ok::<(), corrupted_games::Error>(())
//! ```

use crate::error::Result;
use crate::metrics::external_regret;
use crate::simplex::{logbarrier_dual_norm, logbarrier_local_norm, lp_distance, Norm, SimplexVector};

/// Numerical slack for the regret-bound audits.
pub const RVU_SLACK: f64 = 1e-9;

/// Slack for the learning-rate difference law.
pub const LR_DIFF_SLACK: f64 = 1e-12;

/// Outcome of a regret-bound audit.
#[derive(Debug, Clone)]
pub struct RvuAudit {
    /// Measured regret (left-hand side).
    pub regret: f64,
    /// Analytic bound (right-hand side).
    pub bound: f64,
    /// Whether the bound's precondition held; when false the inequality is
    /// not claimed and `satisfied` is vacuously true.
    pub applicable: bool,
    pub satisfied: bool,
}

fn finish_audit(regret: f64, bound: f64, applicable: bool) -> RvuAudit {
    let satisfied = !applicable || regret <= bound + RVU_SLACK;
    RvuAudit { regret, bound, applicable, satisfied }
}

/// Regret bound of the adaptive entropy learner, in the loss convention
/// `l_t = -u_t` with predictions `m_t = l_{t-1}` (anchor zero):
///
/// `Reg_T <= ln(m)/eta_{T+1} + sum_t eta_t ||l_t - m_t||_inf^2
///          - sum_t ||x_t - x_{t+1}||_1^2 / (4 eta_t) + 2 ||m_{T+1}||_inf`.
///
/// `suggested` are the learner's iterates for rounds `1..=T`,
/// `final_suggested` the unplayed iterate of round `T + 1`, and the rates
/// likewise.
pub fn entropy_rvu_audit(
    suggested: &[SimplexVector],
    final_suggested: &SimplexVector,
    observed_utility: &[Vec<f64>],
    rates: &[f64],
    final_rate: f64,
) -> Result<RvuAudit> {
    let t_max = suggested.len();
    assert!(t_max > 0 && observed_utility.len() == t_max && rates.len() == t_max);
    let m = suggested[0].dim();

    let regret = external_regret(suggested, observed_utility)?;

    let mut bound = (m as f64).ln() / final_rate;
    let mut prev_loss = vec![0.0; m];
    for t in 0..t_max {
        let loss: Vec<f64> = observed_utility[t].iter().map(|u| -u).collect();
        bound += rates[t] * lp_distance(&loss, &prev_loss, Norm::LInf)?.powi(2);
        let next = if t + 1 < t_max { &suggested[t + 1] } else { final_suggested };
        let move_l1 = lp_distance(suggested[t].as_slice(), next.as_slice(), Norm::L1)?;
        bound -= move_l1 * move_l1 / (4.0 * rates[t]);
        prev_loss = loss;
    }
    // m_{T+1} = l_T
    bound += 2.0 * lp_norm_inf(&prev_loss);

    Ok(finish_audit(regret, bound, true))
}

fn lp_norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Regret bound of one log-barrier expert, in the loss convention with
/// predictions `m_t = l_{t-1}`:
///
/// `Reg_T <= m ln(T)/eta_{T+1} + 4 sum_t eta_t ||l_t - m_t||_{*,x_t}^2
///          - sum_t ||x_{t+1} - x_t||_{x_t}^2 / (16 eta_t) + 6 L`
///
/// with `L` the largest sup-norm among losses and predictions. The bound is
/// only claimed when every consecutive step is locally small,
/// `||x_{t+1} - x_t||_{x_t} <= 1/2`; otherwise `applicable` is false.
pub fn logbarrier_rvu_audit(
    steps: &[SimplexVector],
    final_step: &SimplexVector,
    observed_utility: &[Vec<f64>],
    rates: &[f64],
    final_rate: f64,
    horizon: usize,
) -> Result<RvuAudit> {
    let t_max = steps.len();
    assert!(t_max > 0 && observed_utility.len() == t_max && rates.len() == t_max);
    let m = steps[0].dim();

    let regret = external_regret(steps, observed_utility)?;

    let mut bound = m as f64 * (horizon as f64).ln() / final_rate;
    let mut sup = 0.0f64;
    let mut applicable = true;
    let mut prev_loss = vec![0.0; m];
    for t in 0..t_max {
        let loss: Vec<f64> = observed_utility[t].iter().map(|u| -u).collect();
        sup = sup.max(lp_norm_inf(&loss));
        let diff: Vec<f64> = loss.iter().zip(&prev_loss).map(|(a, b)| a - b).collect();
        bound += 4.0 * rates[t] * logbarrier_dual_norm(&diff, &steps[t])?.powi(2);

        let next = if t + 1 < t_max { &steps[t + 1] } else { final_step };
        let step_vec: Vec<f64> = next
            .as_slice()
            .iter()
            .zip(steps[t].as_slice())
            .map(|(a, b)| a - b)
            .collect();
        let local = logbarrier_local_norm(&step_vec, &steps[t])?;
        if local > 0.5 {
            applicable = false;
        }
        bound -= local * local / (16.0 * rates[t]);
        prev_loss = loss;
    }
    bound += 6.0 * sup;

    Ok(finish_audit(regret, bound, applicable))
}

/// Outcome of a per-round law check: the largest violation (left minus
/// right) over all rounds, and whether it stayed within slack.
#[derive(Debug, Clone)]
pub struct LawCheck {
    pub max_violation: f64,
    pub rounds_checked: usize,
    pub satisfied: bool,
}

/// Learning-rate difference law of one expert `a` inside the swap learner:
///
/// `1/eta_t - 1/eta_{t-1} <= sqrt(8) (x_{t-1}(a) + x_{t-2}(a)) / sqrt(m ln T)`
///
/// where `x_s(a)` is the suggestion weight scaling the expert's feedback
/// (treated as zero for `s = 0`). Holds whenever observed utilities stay in
/// `[-1, 1]`; rates cover rounds `1..=T+1`, suggestions rounds `1..=T`.
pub fn lr_diff_check(
    suggestion_weights: &[f64],
    rates: &[f64],
    dimension: usize,
    horizon: usize,
) -> LawCheck {
    let t_plus = rates.len();
    assert!(t_plus >= 2 && suggestion_weights.len() + 1 == t_plus);
    let scale = 8f64.sqrt() / (dimension as f64 * (horizon as f64).ln()).sqrt();
    let mut max_violation = f64::NEG_INFINITY;
    // rates[t] is eta_{t+1}; check transitions t = 2..=T+1 (index 1..t_plus)
    for t in 1..t_plus {
        let lhs = 1.0 / rates[t] - 1.0 / rates[t - 1];
        let w_prev = suggestion_weights[t - 1];
        let w_prev2 = if t >= 2 { suggestion_weights[t - 2] } else { 0.0 };
        let rhs = scale * (w_prev + w_prev2) + LR_DIFF_SLACK;
        max_violation = max_violation.max(lhs - rhs);
    }
    LawCheck { max_violation, rounds_checked: t_plus - 1, satisfied: max_violation <= 0.0 }
}

/// Monotonicity and cap law of a learning-rate sequence.
pub fn lr_monotone_check(rates: &[f64], cap: f64) -> LawCheck {
    let mut max_violation = f64::NEG_INFINITY;
    for (t, &eta) in rates.iter().enumerate() {
        max_violation = max_violation.max(eta - cap - 1e-15);
        if t > 0 {
            max_violation = max_violation.max(eta - rates[t - 1] - 1e-15);
        }
    }
    LawCheck { max_violation, rounds_checked: rates.len(), satisfied: max_violation <= 0.0 }
}

/// Markov-chain stability inequalities of the swap learner. For each round
/// with `sum_a mu_a <= 1/2` the suggestion's movement is bounded by the
/// expert rows' movement:
///
/// `||x_t - x_{t-1}||_1 <= 8 sum_a mu_a` and
/// `||x_t - x_{t-1}||_1^2 <= 64 m sum_a mu_a^2`.
///
/// Rounds where the precondition fails are skipped (not violations).
pub fn markov_stability_check(suggestions: &[SimplexVector], mus: &[Vec<f64>]) -> LawCheck {
    assert_eq!(suggestions.len(), mus.len());
    let mut max_violation = f64::NEG_INFINITY;
    let mut rounds_checked = 0;
    for t in 1..suggestions.len() {
        let mu_sum: f64 = mus[t].iter().sum();
        if mu_sum > 0.5 {
            continue;
        }
        rounds_checked += 1;
        let m = suggestions[t].dim() as f64;
        let move_l1 =
            lp_distance(suggestions[t].as_slice(), suggestions[t - 1].as_slice(), Norm::L1)
                .expect("equal dims");
        let mu_sq: f64 = mus[t].iter().map(|u| u * u).sum();
        max_violation = max_violation.max(move_l1 - 8.0 * mu_sum - 1e-12);
        max_violation = max_violation.max(move_l1 * move_l1 - 64.0 * m * mu_sq - 1e-12);
    }
    if rounds_checked == 0 {
        max_violation = 0.0;
    }
    LawCheck { max_violation, rounds_checked, satisfied: max_violation <= 0.0 }
}

/// Honest-regime slow-movement check of a swap learner:
///
/// `sum_a (1/sqrt(eta_a^{t+1})) ||y_a^{t+1} - y_a^t||_{y_a^t} <= 1/2`
///
/// per round. `rows` and `rates` cover rounds `1..=T+1` (the run's rounds
/// plus the unplayed final step); row index is time, inner index is expert.
pub fn honest_local_norm_check(rows: &[Vec<SimplexVector>], rates: &[Vec<f64>]) -> Result<LawCheck> {
    assert_eq!(rows.len(), rates.len());
    let mut max_violation = f64::NEG_INFINITY;
    let mut rounds_checked = 0;
    for t in 1..rows.len() {
        let mut total = 0.0;
        for a in 0..rows[t].len() {
            let step: Vec<f64> = rows[t][a]
                .as_slice()
                .iter()
                .zip(rows[t - 1][a].as_slice())
                .map(|(x, y)| x - y)
                .collect();
            total += logbarrier_local_norm(&step, &rows[t - 1][a])? / rates[t][a].sqrt();
        }
        rounds_checked += 1;
        max_violation = max_violation.max(total - 0.5);
    }
    if rounds_checked == 0 {
        max_violation = 0.0;
    }
    Ok(LawCheck { max_violation, rounds_checked, satisfied: max_violation <= 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::NoAdversary;
    use crate::engine::{run_general_sum, run_zero_sum, Algorithm, Budgets, ZeroSumGame};
    use crate::engine::GeneralSumGame;
    use crate::logbarrier::expert_lr_cap;

    fn honest_zero_sum(t: usize) -> crate::engine::ZeroSumRun {
        let game = ZeroSumGame::new(vec![vec![0.6, -1.0], vec![-0.8, 1.0]]).unwrap();
        run_zero_sum(
            &game,
            Algorithm::AdaptiveEntropy,
            Algorithm::AdaptiveEntropy,
            &[Budgets::honest(), Budgets::honest()],
            &mut NoAdversary,
            t,
        )
        .unwrap()
    }

    #[test]
    fn entropy_audit_holds_on_honest_run() {
        let run = honest_zero_sum(200);
        let [x_trace, _] = run.traces();
        let rates: Vec<f64> = run.rounds.iter().map(|r| r.eta_x).collect();
        let audit = entropy_rvu_audit(
            &x_trace.suggested,
            &run.final_x,
            &x_trace.observed_utility,
            &rates,
            run.final_eta_x,
        )
        .unwrap();
        assert!(audit.applicable);
        assert!(audit.satisfied, "regret {} > bound {}", audit.regret, audit.bound);
    }

    #[test]
    fn entropy_audit_bound_is_not_vacuous() {
        // single round, zero losses: bound reduces to ln(m)/eta terms
        let run = honest_zero_sum(1);
        let [x_trace, _] = run.traces();
        let audit = entropy_rvu_audit(
            &x_trace.suggested,
            &run.final_x,
            &x_trace.observed_utility,
            &[run.rounds[0].eta_x],
            run.final_eta_x,
        )
        .unwrap();
        assert!(audit.bound < 10.0);
    }

    fn honest_general_sum(t: usize) -> crate::engine::GeneralSumRun {
        let zs = ZeroSumGame::new(vec![vec![0.5, -0.5], vec![-0.25, 0.75]]).unwrap();
        let game = GeneralSumGame::from_zero_sum(&zs);
        run_general_sum(&game, &[Budgets::honest(), Budgets::honest()], &mut NoAdversary, t)
            .unwrap()
    }

    #[test]
    fn logbarrier_audit_holds_per_expert() {
        let horizon = 100;
        let run = honest_general_sum(horizon);
        for i in 0..run.players() {
            let m = run.rounds[0][i].expert_rows.len();
            for a in 0..m {
                let steps: Vec<_> =
                    run.rounds.iter().map(|r| r[i].expert_rows[a].clone()).collect();
                let scaled: Vec<Vec<f64>> = run
                    .rounds
                    .iter()
                    .map(|r| {
                        let w = r[i].suggested[a];
                        r[i].observed_utility.iter().map(|u| w * u).collect()
                    })
                    .collect();
                let rates: Vec<f64> = run.rounds.iter().map(|r| r[i].expert_rates[a]).collect();
                let audit = logbarrier_rvu_audit(
                    &steps,
                    &run.final_rows[i][a],
                    &scaled,
                    &rates,
                    run.final_rates[i][a],
                    horizon,
                )
                .unwrap();
                assert!(audit.applicable, "honest run should stay locally stable");
                assert!(audit.satisfied, "expert ({i},{a}): {} > {}", audit.regret, audit.bound);
            }
        }
    }

    #[test]
    fn lr_diff_law_on_honest_run() {
        let horizon = 60;
        let run = honest_general_sum(horizon);
        for i in 0..run.players() {
            let m = run.rounds[0][i].expert_rows.len();
            for a in 0..m {
                let weights: Vec<f64> = run.rounds.iter().map(|r| r[i].suggested[a]).collect();
                let mut rates: Vec<f64> =
                    run.rounds.iter().map(|r| r[i].expert_rates[a]).collect();
                rates.push(run.final_rates[i][a]);
                let check = lr_diff_check(&weights, &rates, m, horizon);
                assert!(check.satisfied, "violation {}", check.max_violation);
            }
        }
    }

    #[test]
    fn lr_monotone_law() {
        let ok = lr_monotone_check(&[0.5, 0.5, 0.3, 0.1], 0.5);
        assert!(ok.satisfied);
        let cap_broken = lr_monotone_check(&[0.6], 0.5);
        assert!(!cap_broken.satisfied);
        let not_monotone = lr_monotone_check(&[0.3, 0.4], 0.5);
        assert!(!not_monotone.satisfied);
    }

    #[test]
    fn markov_stability_on_honest_run() {
        let run = honest_general_sum(80);
        for i in 0..run.players() {
            let suggestions: Vec<_> =
                run.rounds.iter().map(|r| r[i].suggested.clone()).collect();
            let mus: Vec<Vec<f64>> =
                run.rounds.iter().map(|r| r[i].stability.mu.clone()).collect();
            let check = markov_stability_check(&suggestions, &mus);
            assert!(check.rounds_checked > 0);
            assert!(check.satisfied, "violation {}", check.max_violation);
        }
    }

    #[test]
    fn honest_local_norm_stays_small() {
        let run = honest_general_sum(50);
        for i in 0..run.players() {
            let mut rows: Vec<Vec<SimplexVector>> =
                run.rounds.iter().map(|r| r[i].expert_rows.clone()).collect();
            rows.push(run.final_rows[i].clone());
            let mut rates: Vec<Vec<f64>> =
                run.rounds.iter().map(|r| r[i].expert_rates.clone()).collect();
            rates.push(run.final_rates[i].clone());
            let check = honest_local_norm_check(&rows, &rates).unwrap();
            assert!(check.satisfied, "violation {}", check.max_violation);
        }
    }

    #[test]
    fn expert_rates_respect_cap_during_run() {
        let run = honest_general_sum(20);
        for i in 0..run.players() {
            let m = run.rounds[0][i].expert_rows.len();
            let cap = expert_lr_cap(2, m);
            for a in 0..m {
                let rates: Vec<f64> = run.rounds.iter().map(|r| r[i].expert_rates[a]).collect();
                assert!(lr_monotone_check(&rates, cap).satisfied);
            }
        }
    }
}
