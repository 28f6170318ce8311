//! Probability-simplex vectors, lp distances, and the log-barrier local norms.
//!
//! The local norm at base point `y` is induced by the Hessian of the
//! log-barrier `phi(y) = -sum_k log y(k)`, which is `diag(1/y(k)^2)`:
//! `||h||_y = sqrt(sum_k h(k)^2 / y(k)^2)`, with dual
//! `||w||_{*,y} = sqrt(sum_k w(k)^2 y(k)^2)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance used by internal constructors that already produce normalized
/// output (softmax, barrier argmax, power iteration).
pub const INTERNAL_TOL: f64 = 1e-9;

/// A probability distribution over actions: nonnegative entries summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexVector(Vec<f64>);

impl SimplexVector {
    /// Validates `v` as a simplex point with tolerance `tol`.
    ///
    /// Entries in `[-tol, 0)` are clipped to zero and the vector is
    /// renormalized; downstream solvers produce tiny negative round-off and
    /// rejecting it would be needlessly brittle. Anything worse than `tol`
    /// is an error.
    ///
    /// ```
    /// use corrupted_games::simplex::SimplexVector;
    /// let p = SimplexVector::validate(vec![0.5, 0.5], 1e-9).unwrap();
    /// assert_eq!(p.as_slice(), &[0.5, 0.5]);
    /// assert!(SimplexVector::validate(vec![0.7, 0.2], 1e-9).is_err());
    /// ```
    pub fn validate(v: Vec<f64>, tol: f64) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::NotASimplex("empty vector".into()));
        }
        if let Some(x) = v.iter().find(|x| !x.is_finite()) {
            return Err(Error::NotASimplex(format!("non-finite entry {x}")));
        }
        if let Some(x) = v.iter().find(|&&x| x < -tol) {
            return Err(Error::NotASimplex(format!("entry {x} < -{tol}")));
        }
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::NotASimplex(format!("sum {sum} not within {tol} of 1")));
        }
        let mut v = v;
        for x in &mut v {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let sum: f64 = v.iter().sum();
        for x in &mut v {
            *x /= sum;
        }
        Ok(SimplexVector(v))
    }

    /// Constructor for internally produced vectors; panics on violation
    /// rather than propagating, since a violation here is a library bug.
    pub(crate) fn from_normalized(v: Vec<f64>) -> Self {
        Self::validate(v, INTERNAL_TOL).expect("internal simplex invariant violated")
    }

    /// Uniform distribution over `m` actions.
    pub fn uniform(m: usize) -> Self {
        assert!(m > 0);
        SimplexVector(vec![1.0 / m as f64; m])
    }

    /// Vertex `e_k` of the simplex.
    pub fn vertex(m: usize, k: usize) -> Self {
        assert!(k < m);
        let mut v = vec![0.0; m];
        v[k] = 1.0;
        SimplexVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Inner product with an arbitrary vector of the same dimension.
    pub fn dot(&self, other: &[f64]) -> f64 {
        debug_assert_eq!(self.dim(), other.len());
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

impl std::ops::Index<usize> for SimplexVector {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// A payoff vector. True utilities live in [-1, 1]; corrupted observations
/// may exceed that only by the declared corruption and are clamped to
/// [-2, 2] by the engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityVector(Vec<f64>);

impl UtilityVector {
    /// A true (uncorrupted) utility vector; entries must lie in [-1, 1].
    pub fn new(v: Vec<f64>) -> Result<Self> {
        if let Some(x) = v.iter().find(|&&x| !x.is_finite() || x.abs() > 1.0) {
            return Err(Error::Config(format!("utility entry {x} outside [-1, 1]")));
        }
        Ok(UtilityVector(v))
    }

    /// A corrupted observation; entries must lie in the engine clamp range
    /// [-2, 2].
    pub fn new_corrupted(v: Vec<f64>) -> Result<Self> {
        if let Some(x) = v.iter().find(|&&x| !x.is_finite() || x.abs() > 2.0) {
            return Err(Error::Config(format!("corrupted utility entry {x} outside [-2, 2]")));
        }
        Ok(UtilityVector(v))
    }

    pub fn zero(m: usize) -> Self {
        UtilityVector(vec![0.0; m])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Which lp norm to use in [`lp_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    L1,
    L2,
    LInf,
}

/// `||a - b||_q` for q in {1, 2, inf}.
///
/// ```
/// use corrupted_games::simplex::{lp_distance, Norm};
/// assert_eq!(lp_distance(&[1.0, 0.0], &[0.0, 1.0], Norm::L1).unwrap(), 2.0);
/// assert_eq!(lp_distance(&[1.0, 0.0], &[0.0, 1.0], Norm::LInf).unwrap(), 1.0);
/// ```
pub fn lp_distance(a: &[f64], b: &[f64], q: Norm) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { left: a.len(), right: b.len() });
    }
    let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
    Ok(match q {
        Norm::L1 => diffs.sum(),
        Norm::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
        Norm::LInf => diffs.fold(0.0, f64::max),
    })
}

/// `||v||_q` against the origin.
pub fn lp_norm(v: &[f64], q: Norm) -> f64 {
    lp_distance(v, &vec![0.0; v.len()], q).expect("equal dims by construction")
}

fn check_base(y: &SimplexVector) -> Result<()> {
    if let Some(k) = y.as_slice().iter().position(|&p| p <= 0.0) {
        return Err(Error::DegenerateBase(k));
    }
    Ok(())
}

/// Log-barrier local norm `||h||_{y,phi} = sqrt(sum_k h(k)^2 / y(k)^2)`.
pub fn logbarrier_local_norm(h: &[f64], y: &SimplexVector) -> Result<f64> {
    if h.len() != y.dim() {
        return Err(Error::DimensionMismatch { left: h.len(), right: y.dim() });
    }
    check_base(y)?;
    let s: f64 = h
        .iter()
        .zip(y.as_slice())
        .map(|(hk, yk)| (hk / yk) * (hk / yk))
        .sum();
    Ok(s.sqrt())
}

/// Dual local norm `||w||_{*,y,phi} = sqrt(sum_k w(k)^2 y(k)^2)`.
///
/// Always bounded by `||w||_inf` since `sum_k y(k)^2 <= 1`.
pub fn logbarrier_dual_norm(w: &[f64], y: &SimplexVector) -> Result<f64> {
    if w.len() != y.dim() {
        return Err(Error::DimensionMismatch { left: w.len(), right: y.dim() });
    }
    check_base(y)?;
    let s: f64 = w
        .iter()
        .zip(y.as_slice())
        .map(|(wk, yk)| (wk * yk) * (wk * yk))
        .sum();
    Ok(s.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validate_accepts_exact_point() {
        let p = SimplexVector::validate(vec![0.5, 0.5], 1e-9).unwrap();
        assert_eq!(p.as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn validate_rejects_bad_sum() {
        assert!(matches!(
            SimplexVector::validate(vec![0.7, 0.2], 1e-9),
            Err(Error::NotASimplex(_))
        ));
    }

    #[test]
    fn validate_renormalizes_within_tolerance() {
        let p = SimplexVector::validate(vec![1.0 - 1e-13, 2e-13], 1e-9).unwrap();
        let sum: f64 = p.as_slice().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-15);
        assert!(p.as_slice().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn validate_clips_tiny_negative() {
        let p = SimplexVector::validate(vec![1.0 + 1e-13, -1e-13], 1e-9).unwrap();
        assert!(p.as_slice()[1] >= 0.0);
        let sum: f64 = p.as_slice().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn lp_distance_cases() {
        let a = [1.0, 0.0];
        let b = [0.0, 1.0];
        assert_eq!(lp_distance(&a, &a, Norm::L2).unwrap(), 0.0);
        assert_eq!(lp_distance(&a, &b, Norm::L1).unwrap(), 2.0);
        assert_eq!(lp_distance(&a, &b, Norm::LInf).unwrap(), 1.0);
        assert!(lp_distance(&a, &[1.0], Norm::L1).is_err());
    }

    #[test]
    fn local_norm_hand_values() {
        let y = SimplexVector::validate(vec![0.5, 0.5], 1e-9).unwrap();
        assert_eq!(logbarrier_local_norm(&[0.0, 0.0], &y).unwrap(), 0.0);
        // sqrt(0.1^2/0.25 + 0.1^2/0.25) = sqrt(0.08)
        let v = logbarrier_local_norm(&[0.1, -0.1], &y).unwrap();
        assert!((v - 0.2828427).abs() < 1e-6);
        let y3 = SimplexVector::validate(vec![0.1, 0.1, 0.8], 1e-9).unwrap();
        let v3 = logbarrier_local_norm(&[0.01, -0.01, 0.0], &y3).unwrap();
        assert!((v3 - 0.1414214).abs() < 1e-6);
    }

    #[test]
    fn dual_norm_hand_values() {
        let y = SimplexVector::validate(vec![0.5, 0.5], 1e-9).unwrap();
        assert_eq!(logbarrier_dual_norm(&[0.0, 0.0], &y).unwrap(), 0.0);
        let v = logbarrier_dual_norm(&[1.0, 1.0], &y).unwrap();
        assert!((v - 0.7071068).abs() < 1e-6);
    }

    #[test]
    fn degenerate_base_rejected() {
        let y = SimplexVector::vertex(2, 0);
        assert!(matches!(
            logbarrier_local_norm(&[0.1, 0.1], &y),
            Err(Error::DegenerateBase(1))
        ));
    }

    fn interior_point(dim: usize, raw: Vec<f64>) -> SimplexVector {
        let shifted: Vec<f64> = raw.iter().take(dim).map(|x| x.abs() + 1e-3).collect();
        let sum: f64 = shifted.iter().sum();
        SimplexVector::validate(shifted.iter().map(|x| x / sum).collect(), 1e-9).unwrap()
    }

    proptest! {
        #[test]
        fn dual_norm_below_linf(
            w in proptest::collection::vec(-10.0f64..10.0, 2..6),
            raw in proptest::collection::vec(0.01f64..1.0, 6),
        ) {
            let y = interior_point(w.len(), raw);
            let dual = logbarrier_dual_norm(&w, &y).unwrap();
            let linf = lp_norm(&w, Norm::LInf);
            prop_assert!(dual <= linf + 1e-12);
        }

        // Hölder pairing of the primal/dual local norms.
        #[test]
        fn holder_pairing(
            w in proptest::collection::vec(-10.0f64..10.0, 2..6),
            h in proptest::collection::vec(-10.0f64..10.0, 6),
            raw in proptest::collection::vec(0.01f64..1.0, 6),
        ) {
            let d = w.len();
            let h = &h[..d];
            let y = interior_point(d, raw);
            let pairing: f64 = w.iter().zip(h).map(|(a, b)| a * b).sum();
            let bound = logbarrier_dual_norm(&w, &y).unwrap()
                * logbarrier_local_norm(h, &y).unwrap();
            prop_assert!(bound - pairing.abs() >= -1e-12 * (1.0 + bound.abs()));
        }

        #[test]
        fn validate_output_is_simplex(
            raw in proptest::collection::vec(0.0f64..1.0, 2..8),
        ) {
            let sum: f64 = raw.iter().sum();
            prop_assume!(sum > 1e-6);
            let v: Vec<f64> = raw.iter().map(|x| x / sum).collect();
            let p = SimplexVector::validate(v, 1e-9).unwrap();
            let total: f64 = p.as_slice().iter().sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
            prop_assert!(p.as_slice().iter().all(|&x| x >= 0.0));
        }
    }
}
