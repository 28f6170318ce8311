//! Regret variants, path lengths, and equilibrium gaps, computed exactly
//! from recorded traces.
//!
//! Under corruption the played strategy can differ from the suggested one and
//! the observed utility from the true one, so every regret comes in four
//! variants indexed by (played | suggested) x (true | observed). Inner
//! maxima over comparator simplices are taken at vertices, which is exact by
//! linearity.
//!
//! ```
//! use corrupted_games::metrics::{external_regret, swap_regret};
//! use corrupted_games::simplex::SimplexVector;
//!
//! let plays = vec![
//!     SimplexVector::validate(vec![0.5, 0.5], 1e-9)?,
//!     SimplexVector::validate(vec![0.9, 0.1], 1e-9)?,
//! ];
//! let utilities = vec![vec![1.0, 0.0], vec![1.0, 0.0]];
//! // the best fixed action earns 2.0; the plays earned 0.5 + 0.9
//! assert!((external_regret(&plays, &utilities)? - 0.6).abs() < 1e-12);
//! // a constant swap function recovers external regret, so swap dominates
//! // (up to round-off; the two coincide on this sequence)
//! assert!(swap_regret(&plays, &utilities)? >= external_regret(&plays, &utilities)? - 1e-12);
//! # Ok::<(), corrupted_games::Error>(())
//! ```

use crate::error::{Error, Result};
use crate::simplex::{lp_distance, Norm, SimplexVector};
use serde::Serialize;

/// Strategy/utility combination selecting one of the four regret variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// Played strategies against true utilities.
    PlayedTrue,
    /// Suggested strategies against true utilities.
    SuggestedTrue,
    /// Played strategies against observed (corrupted) utilities.
    PlayedObserved,
    /// Suggested strategies against observed utilities.
    SuggestedObserved,
}

pub const VARIANTS: [Variant; 4] = [
    Variant::PlayedTrue,
    Variant::SuggestedTrue,
    Variant::PlayedObserved,
    Variant::SuggestedObserved,
];

/// One player's view of a finished run.
#[derive(Debug, Clone, Default)]
pub struct PlayerTrace {
    pub suggested: Vec<SimplexVector>,
    pub played: Vec<SimplexVector>,
    pub true_utility: Vec<Vec<f64>>,
    pub observed_utility: Vec<Vec<f64>>,
}

impl PlayerTrace {
    pub fn rounds(&self) -> usize {
        self.suggested.len()
    }

    pub fn check_complete(&self) -> Result<()> {
        let t = self.rounds();
        if self.played.len() != t || self.true_utility.len() != t || self.observed_utility.len() != t
        {
            return Err(Error::IncompleteTrace(format!(
                "lengths {} / {} / {} / {}",
                t,
                self.played.len(),
                self.true_utility.len(),
                self.observed_utility.len()
            )));
        }
        Ok(())
    }

    fn select(&self, variant: Variant) -> (&[SimplexVector], &[Vec<f64>]) {
        match variant {
            Variant::PlayedTrue => (&self.played, &self.true_utility),
            Variant::SuggestedTrue => (&self.suggested, &self.true_utility),
            Variant::PlayedObserved => (&self.played, &self.observed_utility),
            Variant::SuggestedObserved => (&self.suggested, &self.observed_utility),
        }
    }
}

/// External regret `max_k sum_t u_t(k) - sum_t <x_t, u_t>` in the
/// utility-maximization convention.
///
/// ```
/// use corrupted_games::metrics::external_regret;
/// use corrupted_games::simplex::SimplexVector;
/// let plays = vec![SimplexVector::vertex(2, 0)];
/// let utils = vec![vec![0.0, 1.0]];
/// assert_eq!(external_regret(&plays, &utils).unwrap(), 1.0);
/// ```
pub fn external_regret(plays: &[SimplexVector], utilities: &[Vec<f64>]) -> Result<f64> {
    if plays.len() != utilities.len() {
        return Err(Error::DimensionMismatch { left: plays.len(), right: utilities.len() });
    }
    if plays.is_empty() {
        return Ok(0.0);
    }
    let m = plays[0].dim();
    let mut cumulative = vec![0.0; m];
    let mut earned = 0.0;
    for (x, u) in plays.iter().zip(utilities) {
        if u.len() != m || x.dim() != m {
            return Err(Error::DimensionMismatch { left: u.len(), right: m });
        }
        for k in 0..m {
            cumulative[k] += u[k];
        }
        earned += x.dot(u);
    }
    let best = cumulative.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    Ok(best - earned)
}

/// Swap regret by the exact row decomposition:
/// `sum_a max_b sum_t x_t(a) (u_t(b) - u_t(a))`.
///
/// Nonnegative up to round-off since the identity remap is feasible.
pub fn swap_regret(plays: &[SimplexVector], utilities: &[Vec<f64>]) -> Result<f64> {
    if plays.len() != utilities.len() {
        return Err(Error::DimensionMismatch { left: plays.len(), right: utilities.len() });
    }
    if plays.is_empty() {
        return Ok(0.0);
    }
    let m = plays[0].dim();
    // gains[a][b] = sum_t x_t(a) * u_t(b)
    let mut gains = vec![vec![0.0; m]; m];
    for (x, u) in plays.iter().zip(utilities) {
        if u.len() != m || x.dim() != m {
            return Err(Error::DimensionMismatch { left: u.len(), right: m });
        }
        for a in 0..m {
            let xa = x[a];
            for b in 0..m {
                gains[a][b] += xa * u[b];
            }
        }
    }
    let mut total = 0.0;
    for a in 0..m {
        let best = gains[a].iter().fold(f64::NEG_INFINITY, |acc, &g| acc.max(g));
        total += best - gains[a][a];
    }
    Ok(total)
}

/// Swap regret against one fixed row-stochastic remap `M` (rows of `M` are
/// simplex points): `sum_t <x_t, M u_t - u_t>`.
pub fn swap_regret_against(
    plays: &[SimplexVector],
    utilities: &[Vec<f64>],
    remap: &[SimplexVector],
) -> Result<f64> {
    let mut total = 0.0;
    for (x, u) in plays.iter().zip(utilities) {
        for a in 0..x.dim() {
            total += x[a] * (remap[a].dot(u) - u[a]);
        }
    }
    Ok(total)
}

/// Anchor convention for the first term of a path-length sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Anchor {
    /// Prepend the zero vector (utility sequences).
    Zero,
    /// Prepend the uniform distribution (strategy sequences).
    Uniform,
    /// Sum only from the second element.
    SkipFirst,
}

/// Squared path length `sum ||z_t - z_{t-1}||_q^2` with the chosen anchor.
pub fn path_length(sequence: &[Vec<f64>], q: Norm, anchor: Anchor) -> Result<f64> {
    if sequence.is_empty() {
        return Err(Error::EmptySequence);
    }
    let m = sequence[0].len();
    let mut total = 0.0;
    match anchor {
        Anchor::Zero => {
            let d = lp_distance(&sequence[0], &vec![0.0; m], q)?;
            total += d * d;
        }
        Anchor::Uniform => {
            let d = lp_distance(&sequence[0], &vec![1.0 / m as f64; m], q)?;
            total += d * d;
        }
        Anchor::SkipFirst => {}
    }
    for w in sequence.windows(2) {
        let d = lp_distance(&w[1], &w[0], q)?;
        total += d * d;
    }
    Ok(total)
}

/// Exploitability of an average strategy profile in a zero-sum game with
/// payoff matrix `a` (row player maximizes `x^T A y`).
pub fn nash_gap(a: &[Vec<f64>], x_bar: &SimplexVector, y_bar: &SimplexVector) -> Result<f64> {
    let (mx, my) = (a.len(), a[0].len());
    if x_bar.dim() != mx || y_bar.dim() != my {
        return Err(Error::DimensionMismatch { left: x_bar.dim(), right: mx });
    }
    // A y_bar and A^T x_bar
    let ay: Vec<f64> = a.iter().map(|row| y_bar.dot(row)).collect();
    let mut atx = vec![0.0; my];
    for i in 0..mx {
        for j in 0..my {
            atx[j] += a[i][j] * x_bar[i];
        }
    }
    let value = x_bar.dot(&ay);
    let best_x = ay.iter().fold(f64::NEG_INFINITY, |acc, &v| acc.max(v));
    let best_y = atx.iter().fold(f64::INFINITY, |acc, &v| acc.min(v));
    Ok((best_x - value).max(value - best_y))
}

/// Correlated-equilibrium gap of the time-averaged joint play: the best
/// per-action swap deviation, `max_i swap_regret_i / T` on true utilities.
pub fn ce_gap(player_traces: &[PlayerTrace]) -> Result<f64> {
    let mut worst = 0.0f64;
    for trace in player_traces {
        trace.check_complete()?;
        let t = trace.rounds().max(1);
        let sr = swap_regret(&trace.played, &trace.true_utility)?;
        worst = worst.max(sr / t as f64);
    }
    Ok(worst)
}

/// All regret variants and path lengths for one player.
#[derive(Debug, Clone, Serialize)]
pub struct PlayerReport {
    /// External regret per variant, in [`VARIANTS`] order.
    pub external: [f64; 4],
    /// Swap regret per variant, in [`VARIANTS`] order.
    pub swap: [f64; 4],
    /// `P_1` of the suggested strategies (uniform anchor).
    pub path_suggested_l1: f64,
    /// `P_inf` of the observed utilities (zero anchor).
    pub path_observed_linf: f64,
    /// `P_inf` of the true utilities (zero anchor).
    pub path_true_linf: f64,
}

/// Regret report for a whole run.
#[derive(Debug, Clone, Serialize)]
pub struct RegretReport {
    pub players: Vec<PlayerReport>,
}

/// Computes all four external and swap regret variants plus path lengths.
pub fn four_variant_report(traces: &[PlayerTrace]) -> Result<RegretReport> {
    let mut players = Vec::with_capacity(traces.len());
    for trace in traces {
        trace.check_complete()?;
        let mut external = [0.0; 4];
        let mut swap = [0.0; 4];
        for (slot, variant) in VARIANTS.iter().enumerate() {
            let (plays, utils) = trace.select(*variant);
            external[slot] = external_regret(plays, utils)?;
            swap[slot] = swap_regret(plays, utils)?;
        }
        let suggested: Vec<Vec<f64>> =
            trace.suggested.iter().map(|s| s.as_slice().to_vec()).collect();
        players.push(PlayerReport {
            external,
            swap,
            path_suggested_l1: path_length(&suggested, Norm::L1, Anchor::Uniform)?,
            path_observed_linf: path_length(&trace.observed_utility, Norm::LInf, Anchor::Zero)?,
            path_true_linf: path_length(&trace.true_utility, Norm::LInf, Anchor::Zero)?,
        });
    }
    Ok(RegretReport { players })
}

impl RegretReport {
    pub fn external(&self, player: usize, variant: Variant) -> f64 {
        let slot = VARIANTS.iter().position(|v| *v == variant).unwrap();
        self.players[player].external[slot]
    }

    pub fn swap(&self, player: usize, variant: Variant) -> f64 {
        let slot = VARIANTS.iter().position(|v| *v == variant).unwrap();
        self.players[player].swap[slot]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: Vec<f64>) -> SimplexVector {
        SimplexVector::validate(v, 1e-9).unwrap()
    }

    #[test]
    fn external_regret_zero_utilities() {
        let plays = vec![sv(vec![0.5, 0.5]); 3];
        let utils = vec![vec![0.0, 0.0]; 3];
        assert_eq!(external_regret(&plays, &utils).unwrap(), 0.0);
    }

    #[test]
    fn external_regret_single_round() {
        let plays = vec![SimplexVector::vertex(2, 0)];
        let utils = vec![vec![0.0, 1.0]];
        assert_eq!(external_regret(&plays, &utils).unwrap(), 1.0);
    }

    #[test]
    fn external_regret_uniform_two_rounds() {
        let plays = vec![sv(vec![0.5, 0.5]); 2];
        let utils = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!((external_regret(&plays, &utils).unwrap() - 0.0).abs() < 1e-15);
    }

    #[test]
    fn swap_regret_vertex_constant_utilities() {
        let plays = vec![SimplexVector::vertex(3, 0); 4];
        let utils = vec![vec![0.1, 0.7, 0.3]; 4];
        // single-row reduction: (max - entry at vertex) * T
        let sr = swap_regret(&plays, &utils).unwrap();
        assert!((sr - 4.0 * (0.7 - 0.1)).abs() < 1e-12);
    }

    #[test]
    fn swap_regret_equal_utilities_zero() {
        let plays = vec![sv(vec![0.3, 0.7]); 5];
        let utils = vec![vec![0.4, 0.4]; 5];
        assert!(swap_regret(&plays, &utils).unwrap().abs() < 1e-12);
    }

    #[test]
    fn swap_regret_alternating_hand_value() {
        let plays = vec![sv(vec![0.5, 0.5]); 2];
        let utils = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(swap_regret(&plays, &utils).unwrap().abs() < 1e-12);
    }

    #[test]
    fn path_length_cases() {
        let constant = vec![vec![0.5, 0.5]; 4];
        assert_eq!(path_length(&constant, Norm::L1, Anchor::SkipFirst).unwrap(), 0.0);
        let jump = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(path_length(&jump, Norm::L1, Anchor::SkipFirst).unwrap(), 4.0);
        let single = vec![vec![1.0, 0.0]];
        assert_eq!(path_length(&single, Norm::LInf, Anchor::Zero).unwrap(), 1.0);
        assert!(path_length(&[], Norm::L1, Anchor::Zero).is_err());
    }

    #[test]
    fn nash_gap_matching_pennies_uniform() {
        let a = vec![vec![1.0, -1.0], vec![-1.0, 1.0]];
        let u = sv(vec![0.5, 0.5]);
        assert!(nash_gap(&a, &u, &u).unwrap().abs() < 1e-15);
    }

    #[test]
    fn nash_gap_identity_game_vertex() {
        let a = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let e1 = SimplexVector::vertex(2, 0);
        assert!((nash_gap(&a, &e1, &e1).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn four_variants_coincide_on_honest_trace() {
        let plays = vec![sv(vec![0.4, 0.6]), sv(vec![0.7, 0.3])];
        let utils = vec![vec![0.2, -0.5], vec![0.9, 0.1]];
        let trace = PlayerTrace {
            suggested: plays.clone(),
            played: plays,
            true_utility: utils.clone(),
            observed_utility: utils,
        };
        let report = four_variant_report(std::slice::from_ref(&trace)).unwrap();
        let e = &report.players[0].external;
        let s = &report.players[0].swap;
        for k in 1..4 {
            assert!((e[k] - e[0]).abs() <= 1e-12);
            assert!((s[k] - s[0]).abs() <= 1e-12);
        }
        // swap nonnegativity
        assert!(s[0] >= -1e-12);
    }
}
