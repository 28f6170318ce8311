//! Game definitions and expected-utility computation.

use crate::error::{Error, Result};
use crate::simplex::SimplexVector;
use serde::{Deserialize, Serialize};

/// Largest joint action space `expected_utility` will enumerate.
pub const MAX_JOINT_ACTIONS: usize = 10_000_000;

/// Two-player zero-sum game with payoff matrix `A` in `[-1, 1]^{m_x x m_y}`;
/// the row player receives `x^T A y`, the column player pays it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroSumGame {
    payoff: Vec<Vec<f64>>,
}

impl ZeroSumGame {
    pub fn new(payoff: Vec<Vec<f64>>) -> Result<Self> {
        if payoff.is_empty() || payoff[0].is_empty() {
            return Err(Error::Config("payoff matrix must be nonempty".into()));
        }
        let my = payoff[0].len();
        for row in &payoff {
            if row.len() != my {
                return Err(Error::Config("ragged payoff matrix".into()));
            }
            if let Some(x) = row.iter().find(|&&x| !x.is_finite() || x.abs() > 1.0) {
                return Err(Error::Config(format!("payoff entry {x} outside [-1, 1]")));
            }
        }
        Ok(ZeroSumGame { payoff })
    }

    pub fn rows(&self) -> usize {
        self.payoff.len()
    }

    pub fn cols(&self) -> usize {
        self.payoff[0].len()
    }

    pub fn payoff(&self) -> &[Vec<f64>] {
        &self.payoff
    }

    /// Reward vector of the row player, `g = A y`.
    pub fn row_reward(&self, y: &SimplexVector) -> Result<Vec<f64>> {
        if y.dim() != self.cols() {
            return Err(Error::DimensionMismatch { left: y.dim(), right: self.cols() });
        }
        Ok(self.payoff.iter().map(|row| y.dot(row)).collect())
    }

    /// Loss vector of the column player, `l = A^T x`.
    pub fn col_loss(&self, x: &SimplexVector) -> Result<Vec<f64>> {
        if x.dim() != self.rows() {
            return Err(Error::DimensionMismatch { left: x.dim(), right: self.rows() });
        }
        let mut out = vec![0.0; self.cols()];
        for (i, row) in self.payoff.iter().enumerate() {
            let xi = x[i];
            for (j, a) in row.iter().enumerate() {
                out[j] += xi * a;
            }
        }
        Ok(out)
    }
}

/// `n`-player general-sum game stored as one flat utility tensor per player,
/// row-major over the joint action space, all values in `[-1, 1]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneralSumGame {
    action_counts: Vec<usize>,
    utilities: Vec<Vec<f64>>,
}

impl GeneralSumGame {
    pub fn new(action_counts: Vec<usize>, utilities: Vec<Vec<f64>>) -> Result<Self> {
        let n = action_counts.len();
        if n == 0 || utilities.len() != n {
            return Err(Error::Config("need one utility tensor per player".into()));
        }
        if action_counts.iter().any(|&m| m < 2) {
            return Err(Error::Config("every player needs at least 2 actions".into()));
        }
        let joint: usize = action_counts.iter().product();
        if joint > MAX_JOINT_ACTIONS {
            return Err(Error::StateSpaceTooLarge(joint));
        }
        for u in &utilities {
            if u.len() != joint {
                return Err(Error::Config(format!(
                    "utility tensor has {} entries, expected {joint}",
                    u.len()
                )));
            }
            if let Some(x) = u.iter().find(|&&x| !x.is_finite() || x.abs() > 1.0) {
                return Err(Error::Config(format!("utility value {x} outside [-1, 1]")));
            }
        }
        Ok(GeneralSumGame { action_counts, utilities })
    }

    /// Bimatrix embedding of a zero-sum game: player 0 gets `A`, player 1
    /// gets `-A`.
    pub fn from_zero_sum(game: &ZeroSumGame) -> Self {
        let (mx, my) = (game.rows(), game.cols());
        let mut u0 = Vec::with_capacity(mx * my);
        let mut u1 = Vec::with_capacity(mx * my);
        for row in game.payoff() {
            for &a in row {
                u0.push(a);
                u1.push(-a);
            }
        }
        GeneralSumGame { action_counts: vec![mx, my], utilities: vec![u0, u1] }
    }

    pub fn players(&self) -> usize {
        self.action_counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    fn strides(&self) -> Vec<usize> {
        let n = self.players();
        let mut strides = vec![1usize; n];
        for j in (0..n - 1).rev() {
            strides[j] = strides[j + 1] * self.action_counts[j + 1];
        }
        strides
    }

    /// Utility of player `i` at a joint pure-action profile.
    pub fn utility_at(&self, player: usize, joint: &[usize]) -> f64 {
        let strides = self.strides();
        let idx: usize = joint.iter().zip(&strides).map(|(a, s)| a * s).sum();
        self.utilities[player][idx]
    }

    /// Expected utility vector of player `i`:
    /// `u_i(a) = E_{a_-i ~ x_-i}[u_i(a, a_-i)]`, by direct summation over the
    /// joint action space weighted by the opponents' product distribution.
    pub fn expected_utility(
        &self,
        player: usize,
        strategies: &[SimplexVector],
    ) -> Result<Vec<f64>> {
        let n = self.players();
        if strategies.len() != n {
            return Err(Error::DimensionMismatch { left: strategies.len(), right: n });
        }
        for (j, s) in strategies.iter().enumerate() {
            if s.dim() != self.action_counts[j] {
                return Err(Error::DimensionMismatch {
                    left: s.dim(),
                    right: self.action_counts[j],
                });
            }
        }
        let joint: usize = self.action_counts.iter().product();
        let strides = self.strides();
        let mi = self.action_counts[player];
        let mut out = vec![0.0; mi];
        let mut profile = vec![0usize; n];
        for idx in 0..joint {
            // decode the joint index into a profile
            let mut rest = idx;
            for j in 0..n {
                profile[j] = rest / strides[j];
                rest %= strides[j];
            }
            let mut weight = 1.0;
            for j in 0..n {
                if j != player {
                    weight *= strategies[j][profile[j]];
                }
            }
            out[profile[player]] += weight * self.utilities[player][idx];
        }
        // each a_i appears with total opponent weight 1, so out is exact
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: Vec<f64>) -> SimplexVector {
        SimplexVector::validate(v, 1e-9).unwrap()
    }

    #[test]
    fn zero_matrix_rewards() {
        let g = ZeroSumGame::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let y = sv(vec![0.3, 0.7]);
        assert_eq!(g.row_reward(&y).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn matching_pennies_uniform_reward() {
        let g = ZeroSumGame::new(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let y = sv(vec![0.5, 0.5]);
        for v in g.row_reward(&y).unwrap() {
            assert!(v.abs() < 1e-15);
        }
    }

    #[test]
    fn rectangular_reward_hand_value() {
        let g = ZeroSumGame::new(vec![vec![1.0, 0.0, -1.0], vec![0.0, 1.0, -1.0]]).unwrap();
        let y = sv(vec![2.0 / 3.0, 0.0, 1.0 / 3.0]);
        let r = g.row_reward(&y).unwrap();
        assert!((r[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((r[1] + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn payoff_range_enforced() {
        assert!(ZeroSumGame::new(vec![vec![1.5]]).is_err());
    }

    #[test]
    fn bimatrix_collapses_to_matrix_product() {
        let zs = ZeroSumGame::new(vec![vec![0.5, -0.2], vec![-0.1, 0.8]]).unwrap();
        let g = GeneralSumGame::from_zero_sum(&zs);
        let x = sv(vec![0.6, 0.4]);
        let y = sv(vec![0.25, 0.75]);
        let u0 = g.expected_utility(0, &[x.clone(), y.clone()]).unwrap();
        let gy = zs.row_reward(&y).unwrap();
        for k in 0..2 {
            assert!((u0[k] - gy[k]).abs() < 1e-14);
        }
        // player 1's expected utility is -(A^T x)
        let u1 = g.expected_utility(1, &[x.clone(), y]).unwrap();
        let lx = zs.col_loss(&x).unwrap();
        for k in 0..2 {
            assert!((u1[k] + lx[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn all_ones_tensor_gives_all_ones() {
        let g = GeneralSumGame::new(vec![2, 2], vec![vec![1.0; 4], vec![1.0; 4]]).unwrap();
        let x = sv(vec![0.1, 0.9]);
        let u = g.expected_utility(0, &[x.clone(), x]).unwrap();
        for v in u {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn three_player_coordination_brute_force() {
        // u_0 = 1 iff all three actions match, else 0; opponents uniform
        let mut u0 = vec![0.0; 8];
        u0[0] = 1.0; // (0,0,0)
        u0[7] = 1.0; // (1,1,1)
        let g = GeneralSumGame::new(vec![2, 2, 2], vec![u0, vec![0.0; 8], vec![0.0; 8]]).unwrap();
        let uni = SimplexVector::uniform(2);
        let u = g
            .expected_utility(0, &[uni.clone(), uni.clone(), uni])
            .unwrap();
        assert!((u[0] - 0.25).abs() < 1e-15);
        assert!((u[1] - 0.25).abs() < 1e-15);
    }
}
