//! Log-barrier optimistic FTRL: the per-expert learner behind the
//! swap-regret minimizer.
//!
//! The update solves `argmax_{y in simplex} <y, w> + (1/eta) * sum_k log y(k)`
//! through its KKT system: `y(k) = 1 / (eta * (lambda - w(k)))` with the
//! unique multiplier `lambda` in `[max w + 1/eta, max w + m/eta]` making the
//! entries sum to one. The dual function is monotone with an analytic
//! bracket, so a safeguarded Newton iteration is exact to machine precision.
//!
//! The expert-wise learning rate is
//! `min( sqrt( (m ln T / 8) / (4 + sum_s ||u_s - u_{s-1}||_inf^2) ), eta_max )`
//! with the cap `eta_max = 1 / (256 n sqrt(m))` and anchor `u_0 = 0`.

use crate::error::{Error, Result};
use crate::simplex::SimplexVector;

const MAX_NEWTON_ITERS: usize = 500;
const KKT_RESIDUAL_TOL: f64 = 1e-10;

/// Learning-rate cap `1 / (256 n sqrt(m))`.
pub fn expert_lr_cap(player_count: usize, dimension: usize) -> f64 {
    1.0 / (256.0 * player_count as f64 * (dimension as f64).sqrt())
}

/// One expert of the swap-regret minimizer: log-barrier OFTRL over the
/// simplex with the adaptive expert-wise learning rate.
#[derive(Debug, Clone)]
pub struct LogBarrierExpert {
    cumulative_utility: Vec<f64>,
    last_utility: Vec<f64>,
    path_accumulator: f64,
    player_count: usize,
    horizon: usize,
    round: usize,
}

impl LogBarrierExpert {
    /// `dimension` actions, `player_count` players in the game, horizon `T`.
    ///
    /// The learning-rate schedule is only defined for `T >= 3`.
    pub fn new(dimension: usize, player_count: usize, horizon: usize) -> Result<Self> {
        if horizon < 3 {
            return Err(Error::HorizonTooSmall(horizon));
        }
        assert!(dimension >= 2 && player_count >= 1);
        Ok(LogBarrierExpert {
            cumulative_utility: vec![0.0; dimension],
            last_utility: vec![0.0; dimension],
            path_accumulator: 0.0,
            player_count,
            horizon,
            round: 1,
        })
    }

    pub fn dim(&self) -> usize {
        self.cumulative_utility.len()
    }

    pub fn path_accumulator(&self) -> f64 {
        self.path_accumulator
    }

    /// The expert-wise adaptive learning rate for the current round.
    pub fn learning_rate(&self) -> f64 {
        let m = self.dim() as f64;
        let adaptive =
            ((m * (self.horizon as f64).ln() / 8.0) / (4.0 + self.path_accumulator)).sqrt();
        adaptive.min(expert_lr_cap(self.player_count, self.dim()))
    }

    /// The OFTRL suggestion `argmax <y, last + cumulative> + phi-regularizer`.
    pub fn step(&self) -> Result<SimplexVector> {
        let scores: Vec<f64> = self
            .cumulative_utility
            .iter()
            .zip(&self.last_utility)
            .map(|(c, l)| c + l)
            .collect();
        logbarrier_argmax(&scores, self.learning_rate())
    }

    /// Feeds the scaled utility `u_a = suggestion(a) * observed_utility`.
    pub fn observe(&self, scaled_utility: &[f64]) -> Result<Self> {
        if scaled_utility.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: scaled_utility.len(),
                right: self.dim(),
            });
        }
        let mut next = self.clone();
        let mut inc = 0.0f64;
        for k in 0..scaled_utility.len() {
            next.cumulative_utility[k] += scaled_utility[k];
            inc = inc.max((scaled_utility[k] - self.last_utility[k]).abs());
        }
        next.path_accumulator += inc * inc;
        next.last_utility.copy_from_slice(scaled_utility);
        next.round += 1;
        Ok(next)
    }
}

/// The unique maximizer of `<y, w> + (1/eta) sum_k log y(k)` over the simplex.
///
/// ```
/// use corrupted_games::logbarrier::logbarrier_argmax;
/// let y = logbarrier_argmax(&[1.0, 0.0], 1.0).unwrap();
/// // lambda solves lambda^2 - 3 lambda + 1 = 0, giving the golden-ratio point
/// assert!((y[0] - 0.6180340).abs() < 1e-7);
/// assert!((y[1] - 0.3819660).abs() < 1e-7);
/// ```
pub fn logbarrier_argmax(w: &[f64], eta: f64) -> Result<SimplexVector> {
    assert!(eta > 0.0, "learning rate must be positive");
    assert!(w.iter().all(|x| x.is_finite()));
    let m = w.len();
    assert!(m >= 2);
    let wmax = w.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));

    // g(lambda) = sum_k 1/(eta (lambda - w_k)) - 1 is strictly decreasing on
    // the bracket, with g >= 0 at the left end and g <= 0 at the right end.
    let mut lo = wmax + 1.0 / eta;
    let mut hi = wmax + m as f64 / eta;
    let eval = |lambda: f64| -> (f64, f64) {
        let mut g = -1.0;
        let mut dg = 0.0;
        for &wk in w {
            let d = eta * (lambda - wk);
            g += 1.0 / d;
            dg -= eta / (d * d);
        }
        (g, dg)
    };

    let mut lambda = 0.5 * (lo + hi);
    let mut g_val = f64::INFINITY;
    for _ in 0..MAX_NEWTON_ITERS {
        let (g, dg) = eval(lambda);
        g_val = g;
        if g.abs() <= 1e-15 {
            break;
        }
        if g > 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        let newton = lambda - g / dg;
        lambda = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * lambda.abs() {
            break;
        }
    }
    if g_val.abs() > 1e-12 {
        return Err(Error::SolverDiverged(g_val.abs()));
    }

    let mut y: Vec<f64> = w.iter().map(|&wk| 1.0 / (eta * (lambda - wk))).collect();
    let sum: f64 = y.iter().sum();
    for yk in &mut y {
        *yk /= sum;
    }

    // KKT stationarity at the returned (renormalized) point.
    let residual = y
        .iter()
        .zip(w)
        .map(|(&yk, &wk)| (wk + 1.0 / (eta * yk) - lambda).abs())
        .fold(0.0, f64::max);
    if residual > KKT_RESIDUAL_TOL {
        return Err(Error::SolverDiverged(residual));
    }
    Ok(SimplexVector::from_normalized(y))
}

/// Exhaustive oracle for [`logbarrier_argmax`]: the exact maximizer of the
/// barrier objective over the simplex lattice with step `h`, solved by
/// dynamic programming over coordinates. Shares no code with the dual
/// solver, so agreement between the two is meaningful evidence.
pub fn grid_argmax(w: &[f64], eta: f64, h: f64) -> Vec<f64> {
    let m = w.len();
    let steps = (1.0 / h).round() as usize;
    let f = |k: usize, c: usize| {
        let y = c as f64 / steps as f64;
        y * w[k] + y.ln() / eta
    };
    // best[r] = max value of the suffix of coordinates with budget r
    let mut best = vec![f64::NEG_INFINITY; steps + 1];
    for c in 1..=steps {
        best[c] = f(m - 1, c);
    }
    // choices[j][r] = count given to coordinate j at suffix budget r,
    // filled from the last coordinate backwards
    let mut choices: Vec<Vec<usize>> = Vec::with_capacity(m - 1);
    for j in (0..m - 1).rev() {
        let mut next = vec![f64::NEG_INFINITY; steps + 1];
        let mut choice = vec![0usize; steps + 1];
        for r in 2..=steps {
            for c in 1..r {
                let v = f(j, c) + best[r - c];
                if v > next[r] {
                    next[r] = v;
                    choice[r] = c;
                }
            }
        }
        best = next;
        choices.push(choice);
    }
    let mut counts = vec![0usize; m];
    let mut remaining = steps;
    for j in 0..m - 1 {
        counts[j] = choices[m - 2 - j][remaining];
        remaining -= counts[j];
    }
    counts[m - 1] = remaining;
    counts.iter().map(|&c| c as f64 / steps as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;

    #[test]
    fn lr_cap_hand_values() {
        // n=1, m=4: 1/(256 * 1 * 2)
        assert!((expert_lr_cap(1, 4) - 0.001953125).abs() < 1e-15);
        // n=2, m=2: 1/(256 * 2 * sqrt(2))
        assert!((expert_lr_cap(2, 2) - 0.00138107).abs() < 1e-8);
    }

    #[test]
    fn lr_fresh_state_cap_binds() {
        let e = LogBarrierExpert::new(2, 2, 100).unwrap();
        // adaptive term sqrt((2 ln 100 / 8) / 4) ~ 0.536 is far above the cap
        let adaptive = ((2.0 * 100f64.ln() / 8.0) / 4.0).sqrt();
        assert!((adaptive - 0.536).abs() < 1e-3);
        assert!((e.learning_rate() - expert_lr_cap(2, 2)).abs() < 1e-15);
    }

    #[test]
    fn lr_nonincreasing() {
        let mut e = LogBarrierExpert::new(3, 2, 50).unwrap();
        let mut prev = e.learning_rate();
        let mut rng = Stream::derive(5, &[1]);
        for _ in 0..30 {
            let u: Vec<f64> = (0..3).map(|_| rng.next_range(-1.0, 1.0)).collect();
            e = e.observe(&u).unwrap();
            let eta = e.learning_rate();
            assert!(eta <= prev + 1e-15);
            prev = eta;
        }
    }

    #[test]
    fn horizon_too_small() {
        assert!(matches!(
            LogBarrierExpert::new(2, 1, 2),
            Err(Error::HorizonTooSmall(2))
        ));
    }

    #[test]
    fn argmax_symmetry() {
        let y = logbarrier_argmax(&[0.0, 0.0], 0.7).unwrap();
        assert!((y[0] - 0.5).abs() < 1e-12);
        let y = logbarrier_argmax(&[3.0, 3.0, 3.0], 0.01).unwrap();
        for &p in y.as_slice() {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn argmax_golden_ratio_instance() {
        let y = logbarrier_argmax(&[1.0, 0.0], 1.0).unwrap();
        let lambda = (3.0 + 5f64.sqrt()) / 2.0;
        let expect0 = 1.0 / (lambda - 1.0);
        assert!((y[0] - expect0).abs() < 1e-12);
        assert!((y[0] - 0.6180340).abs() < 1e-7);
        assert!((y[1] - 0.3819660).abs() < 1e-7);
    }

    #[test]
    fn argmax_matches_grid_oracle() {
        let mut rng = Stream::derive(11, &[7]);
        for case in 0..200 {
            let m = 2 + rng.next_below(3); // m in 2..=4
            let w: Vec<f64> = (0..m).map(|_| rng.next_range(-2.0, 2.0)).collect();
            let eta = rng.next_range(0.05, 2.0);
            let y = logbarrier_argmax(&w, eta).unwrap();
            let oracle = grid_argmax(&w, eta, 1e-3);
            for k in 0..m {
                assert!(
                    (y[k] - oracle[k]).abs() <= 2e-3,
                    "case {case}: solver {:?} vs grid {:?}",
                    y.as_slice(),
                    oracle
                );
            }
        }
    }

    #[test]
    fn argmax_interior_and_kkt_residual() {
        let mut rng = Stream::derive(13, &[2]);
        for _ in 0..500 {
            let m = 2 + rng.next_below(7);
            let w: Vec<f64> = (0..m).map(|_| rng.next_range(-5.0, 5.0)).collect();
            let eta = rng.next_range(1e-3, 5.0);
            let y = logbarrier_argmax(&w, eta).unwrap();
            assert!(y.as_slice().iter().all(|&p| p > 0.0));
        }
    }

    #[test]
    fn fresh_expert_is_uniform() {
        let e = LogBarrierExpert::new(4, 2, 100).unwrap();
        let y = e.step().unwrap();
        for &p in y.as_slice() {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_observations_stay_uniform() {
        let mut e = LogBarrierExpert::new(3, 2, 100).unwrap();
        for _ in 0..5 {
            e = e.observe(&[0.0, 0.0, 0.0]).unwrap();
            let y = e.step().unwrap();
            for &p in y.as_slice() {
                assert!((p - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn step_is_argmax_of_prediction_plus_cumulative() {
        let e = LogBarrierExpert::new(2, 1, 10)
            .unwrap()
            .observe(&[1.0, 0.0])
            .unwrap();
        let eta = e.learning_rate();
        let direct = logbarrier_argmax(&[2.0, 0.0], eta).unwrap();
        let stepped = e.step().unwrap();
        for k in 0..2 {
            assert!((stepped[k] - direct[k]).abs() < 1e-14);
        }
    }
}
