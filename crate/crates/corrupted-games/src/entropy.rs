//! Entropy-regularized optimistic FTRL with an adaptive learning rate, plus
//! the Hedge and constant-rate OFTRL baselines.
//!
//! The adaptive rate is
//! `eta_t = sqrt( (logp(m)/2) / (logp(m) + sum_s ||g_s - g_{s-1}||_inf^2) )`
//! with `logp(z) = max(ln z, 4)` and the anchor `g_0 = 0`. The floor inside
//! `logp` makes the rate start at its cap `1/sqrt(2)` and decrease as the
//! observed utility sequence moves.
//!
//! Logarithms are natural throughout.
//!
//! ```
//! use corrupted_games::entropy::EntropyOftrl;
//!
//! let mut learner = EntropyOftrl::new(3);
//! let start = learner.learning_rate();
//! for t in 0..50 {
//!     let x = learner.step();
//!     assert!((x.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
//!     let utility = vec![(t as f64 * 0.7).sin(), 0.2, -0.5];
//!     learner = learner.observe(&utility)?;
//! }
//! // the rate only decreases as utility variation accumulates
//! assert!(learner.learning_rate() <= start);
//! # Ok::<(), corrupted_games::Error>(())
//! ```

use crate::error::{Error, Result};
use crate::simplex::SimplexVector;

/// Hard cap on the adaptive learning rate, `1/sqrt(2)`.
pub const ENTROPY_LR_CAP: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// `logp(z) = max(ln z, 4)`.
pub fn logp(z: f64) -> f64 {
    z.ln().max(4.0)
}

/// State of the adaptive entropy-OFTRL learner.
///
/// Immutable value type: `observe` returns a new state.
#[derive(Debug, Clone)]
pub struct EntropyOftrl {
    cumulative_utility: Vec<f64>,
    last_utility: Vec<f64>,
    path_accumulator: f64,
    round: usize,
}

impl EntropyOftrl {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension >= 2, "need at least two actions");
        EntropyOftrl {
            cumulative_utility: vec![0.0; dimension],
            last_utility: vec![0.0; dimension],
            path_accumulator: 0.0,
            round: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.cumulative_utility.len()
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn path_accumulator(&self) -> f64 {
        self.path_accumulator
    }

    pub fn last_utility(&self) -> &[f64] {
        &self.last_utility
    }

    pub fn cumulative_utility(&self) -> &[f64] {
        &self.cumulative_utility
    }

    /// The adaptive learning rate for the current round.
    ///
    /// ```
    /// use corrupted_games::entropy::EntropyOftrl;
    /// let fresh = EntropyOftrl::new(3);
    /// assert!((fresh.learning_rate() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    /// ```
    pub fn learning_rate(&self) -> f64 {
        let lp = logp(self.dim() as f64);
        let eta = ((lp / 2.0) / (lp + self.path_accumulator)).sqrt();
        debug_assert!(eta > 0.0 && eta <= ENTROPY_LR_CAP + 1e-15);
        eta
    }

    /// The OFTRL suggestion: softmax of
    /// `eta * (last_utility + cumulative_utility)`, computed with max-shift
    /// and a 1e-300 floor so every entry is strictly positive.
    pub fn step(&self) -> SimplexVector {
        let eta = self.learning_rate();
        let scores: Vec<f64> = self
            .cumulative_utility
            .iter()
            .zip(&self.last_utility)
            .map(|(c, l)| eta * (c + l))
            .collect();
        softmax(&scores)
    }

    /// Feeds one observed utility vector, updating the cumulative sum, the
    /// optimism anchor, and the squared-path-length accumulator.
    pub fn observe(&self, utility: &[f64]) -> Result<Self> {
        if utility.len() != self.dim() {
            return Err(Error::DimensionMismatch { left: utility.len(), right: self.dim() });
        }
        let mut next = self.clone();
        let mut inc = 0.0f64;
        for k in 0..utility.len() {
            next.cumulative_utility[k] += utility[k];
            inc = inc.max((utility[k] - self.last_utility[k]).abs());
        }
        next.path_accumulator += inc * inc;
        next.last_utility.copy_from_slice(utility);
        next.round += 1;
        Ok(next)
    }
}

/// Softmax over raw scores with max-shift and a tiny positive floor.
pub(crate) fn softmax(scores: &[f64]) -> SimplexVector {
    let max = scores.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let mut exps: Vec<f64> = scores.iter().map(|&s| (s - max).exp().max(1e-300)).collect();
    let sum: f64 = exps.iter().sum();
    for e in &mut exps {
        *e /= sum;
    }
    SimplexVector::from_normalized(exps)
}

/// Hedge: softmax of `rate * cumulative_utility`, no optimism term.
pub fn hedge_step(cumulative_utility: &[f64], fixed_rate: f64) -> SimplexVector {
    assert!(fixed_rate > 0.0);
    let scores: Vec<f64> = cumulative_utility.iter().map(|c| fixed_rate * c).collect();
    softmax(&scores)
}

/// Constant-rate OFTRL: softmax of `rate * (last + cumulative)`.
pub fn constant_oftrl_step(state: &EntropyOftrl, fixed_rate: f64) -> SimplexVector {
    assert!(fixed_rate > 0.0);
    let scores: Vec<f64> = state
        .cumulative_utility
        .iter()
        .zip(&state.last_utility)
        .map(|(c, l)| fixed_rate * (c + l))
        .collect();
    softmax(&scores)
}
