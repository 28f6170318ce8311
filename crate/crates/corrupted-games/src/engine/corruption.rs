//! Corruption application and budget accounting.
//!
//! The adversary declares per-round deltas; the ledger scales a delta down
//! proportionally (never per-coordinate) when it would exceed the remaining
//! budget, so the cumulative spend can reach the configured budget exactly
//! but never pass it. Corrupted utilities are clamped to [-2, 2].

use crate::error::{Error, Result};
use crate::simplex::SimplexVector;
use serde::Serialize;

/// Clamp range for observed (corrupted) utilities.
pub const OBSERVED_UTILITY_CLAMP: f64 = 2.0;

/// Corruption budgets of one player: cumulative l1 deviation allowed in
/// strategies and cumulative l-infinity deviation allowed in utilities.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Budgets {
    pub strategy: f64,
    pub utility: f64,
}

impl Budgets {
    pub fn honest() -> Self {
        Budgets::default()
    }

    pub fn new(strategy: f64, utility: f64) -> Self {
        assert!(strategy >= 0.0 && utility >= 0.0);
        Budgets { strategy, utility }
    }
}

/// Budget state of one player during a run.
#[derive(Debug, Clone, Serialize)]
pub struct PlayerLedger {
    pub budgets: Budgets,
    /// `sum_t ||x_t - x_hat_t||_1` so far.
    pub strategy_spent: f64,
    /// `sum_t ||u_t - u_tilde_t||_inf` so far.
    pub utility_spent: f64,
}

impl PlayerLedger {
    fn new(budgets: Budgets) -> Self {
        PlayerLedger { budgets, strategy_spent: 0.0, utility_spent: 0.0 }
    }

    /// Composite corruption level `C_i = 2 C_hat + 2 C_tilde` (the general-sum
    /// convention).
    pub fn composite_general_sum(&self) -> f64 {
        2.0 * self.budgets.strategy + 2.0 * self.budgets.utility
    }

    /// Composite corruption level `C = C_hat + 2 C_tilde` (the zero-sum
    /// convention). Both are reported because the analysis uses both.
    pub fn composite_zero_sum(&self) -> f64 {
        self.budgets.strategy + 2.0 * self.budgets.utility
    }
}

/// Budget accounting for all players of a run.
#[derive(Debug, Clone, Serialize)]
pub struct CorruptionLedger {
    pub players: Vec<PlayerLedger>,
}

impl CorruptionLedger {
    pub fn new(budgets: &[Budgets]) -> Self {
        CorruptionLedger { players: budgets.iter().map(|b| PlayerLedger::new(*b)).collect() }
    }

    /// Applies a strategy delta for `player` on top of `suggested`,
    /// proportionally scaled to the remaining budget. The unscaled
    /// `suggested + delta` must itself be a simplex point (the adversary
    /// contract); the scaled point then is one too, being a convex
    /// combination.
    pub fn apply_strategy_delta(
        &mut self,
        player: usize,
        suggested: &SimplexVector,
        delta: Option<&[f64]>,
    ) -> Result<SimplexVector> {
        let Some(delta) = delta else {
            return Ok(suggested.clone());
        };
        if delta.len() != suggested.dim() {
            return Err(Error::DimensionMismatch { left: delta.len(), right: suggested.dim() });
        }
        let target: Vec<f64> = suggested.as_slice().iter().zip(delta).map(|(s, d)| s + d).collect();
        SimplexVector::validate(target, 1e-9)
            .map_err(|e| Error::InvalidAdversaryMove(e.to_string()))?;

        let ledger = &mut self.players[player];
        let l1: f64 = delta.iter().map(|d| d.abs()).sum();
        let remaining = (ledger.budgets.strategy - ledger.strategy_spent).max(0.0);
        if l1 == 0.0 || remaining == 0.0 {
            return Ok(suggested.clone());
        }
        let scale = (remaining / l1).min(1.0);
        let played: Vec<f64> = suggested
            .as_slice()
            .iter()
            .zip(delta)
            .map(|(s, d)| s + scale * d)
            .collect();
        let played = SimplexVector::validate(played, 1e-9)
            .map_err(|e| Error::InvalidAdversaryMove(e.to_string()))?;
        let spent: f64 = played
            .as_slice()
            .iter()
            .zip(suggested.as_slice())
            .map(|(a, b)| (a - b).abs())
            .sum();
        ledger.strategy_spent += spent;
        debug_assert!(ledger.strategy_spent <= ledger.budgets.strategy + 1e-9);
        Ok(played)
    }

    /// Applies a utility delta for `player` on top of `true_utility`,
    /// proportionally scaled to the remaining budget, then clamped to
    /// [-2, 2]. The ledger records the realized l-infinity deviation.
    pub fn apply_utility_delta(
        &mut self,
        player: usize,
        true_utility: &[f64],
        delta: Option<&[f64]>,
    ) -> Result<Vec<f64>> {
        let Some(delta) = delta else {
            return Ok(true_utility.to_vec());
        };
        if delta.len() != true_utility.len() {
            return Err(Error::DimensionMismatch {
                left: delta.len(),
                right: true_utility.len(),
            });
        }
        let ledger = &mut self.players[player];
        let linf = delta.iter().fold(0.0f64, |a, d| a.max(d.abs()));
        let remaining = (ledger.budgets.utility - ledger.utility_spent).max(0.0);
        if linf == 0.0 || remaining == 0.0 {
            return Ok(true_utility.to_vec());
        }
        let scale = (remaining / linf).min(1.0);
        let observed: Vec<f64> = true_utility
            .iter()
            .zip(delta)
            .map(|(u, d)| (u + scale * d).clamp(-OBSERVED_UTILITY_CLAMP, OBSERVED_UTILITY_CLAMP))
            .collect();
        let spent = observed
            .iter()
            .zip(true_utility)
            .fold(0.0f64, |a, (o, u)| a.max((o - u).abs()));
        ledger.utility_spent += spent;
        debug_assert!(ledger.utility_spent <= ledger.budgets.utility + 1e-9);
        Ok(observed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: Vec<f64>) -> SimplexVector {
        SimplexVector::validate(v, 1e-9).unwrap()
    }

    #[test]
    fn zero_delta_is_identity() {
        let mut ledger = CorruptionLedger::new(&[Budgets::new(1.0, 1.0)]);
        let s = sv(vec![0.4, 0.6]);
        let played = ledger.apply_strategy_delta(0, &s, None).unwrap();
        assert_eq!(played.as_slice(), s.as_slice());
        let observed = ledger.apply_utility_delta(0, &[0.5, -0.5], None).unwrap();
        assert_eq!(observed, vec![0.5, -0.5]);
        assert_eq!(ledger.players[0].strategy_spent, 0.0);
        assert_eq!(ledger.players[0].utility_spent, 0.0);
    }

    #[test]
    fn exhausted_budget_scales_to_zero() {
        let mut ledger = CorruptionLedger::new(&[Budgets::new(0.0, 0.0)]);
        let s = sv(vec![0.5, 0.5]);
        let played = ledger
            .apply_strategy_delta(0, &s, Some(&[0.5, -0.5]))
            .unwrap();
        assert_eq!(played.as_slice(), s.as_slice());
        let observed = ledger.apply_utility_delta(0, &[0.0, 0.0], Some(&[1.0, 0.0])).unwrap();
        assert_eq!(observed, vec![0.0, 0.0]);
    }

    #[test]
    fn over_budget_request_scaled_proportionally() {
        let mut ledger = CorruptionLedger::new(&[Budgets::new(0.5, 0.0)]);
        let s = sv(vec![0.5, 0.5]);
        // requested delta (0.5, -0.5): l1 norm 1, remaining 0.5 -> scale 0.5
        let played = ledger.apply_strategy_delta(0, &s, Some(&[0.5, -0.5])).unwrap();
        assert!((played[0] - 0.75).abs() < 1e-12);
        assert!((ledger.players[0].strategy_spent - 0.5).abs() < 1e-12);
    }

    #[test]
    fn invalid_move_rejected() {
        let mut ledger = CorruptionLedger::new(&[Budgets::new(10.0, 0.0)]);
        let s = sv(vec![0.5, 0.5]);
        assert!(matches!(
            ledger.apply_strategy_delta(0, &s, Some(&[0.7, 0.0])),
            Err(Error::InvalidAdversaryMove(_))
        ));
    }

    #[test]
    fn utility_clamped_to_engine_range() {
        let mut ledger = CorruptionLedger::new(&[Budgets::new(0.0, 100.0)]);
        let observed = ledger.apply_utility_delta(0, &[1.0, 0.0], Some(&[5.0, 0.0])).unwrap();
        assert_eq!(observed[0], 2.0);
        // ledgered spend is the realized deviation, 1.0
        assert!((ledger.players[0].utility_spent - 1.0).abs() < 1e-12);
    }
}
