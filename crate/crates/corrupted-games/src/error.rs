use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a point of the probability simplex: {0}")]
    NotASimplex(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("local norm base point has a nonpositive entry (index {0})")]
    DegenerateBase(usize),
    #[error("log-barrier dual solver did not reach the residual target: residual {0:.3e}")]
    SolverDiverged(f64),
    #[error("horizon T = {0} is too small; the expert learning rate needs T >= 3")]
    HorizonTooSmall(usize),
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("joint action space has {0} entries, above the supported limit")]
    StateSpaceTooLarge(usize),
    #[error("adversary strategy move leaves the simplex: {0}")]
    InvalidAdversaryMove(String),
    #[error("empty sequence")]
    EmptySequence,
    #[error("incomplete trace: {0}")]
    IncompleteTrace(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
