use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// `E` sits within the pole guard of a parity-matched integer `n`
    /// (the singlet, or type-2, pole family).
    #[error("energy {energy} is within the pole guard of the singlet pole E = {n}")]
    SingletPole { n: usize, energy: f64 },

    /// `E` sits within the pole guard of `n - g^2` (the displaced, or
    /// type-1, pole family).
    #[error("energy {energy} is within the pole guard of the displaced pole E = {n} - g^2")]
    DisplacedPole { n: usize, energy: f64 },

    #[error("energy {energy} is outside the convergence domain (E > {lower})")]
    OutOfDomain { energy: f64, lower: f64 },

    #[error("series did not converge within {terms} terms (tail estimate {estimate:e})")]
    NoConvergence { terms: usize, estimate: f64 },

    #[error("eigensolver did not reach the residual bound in {sweeps} sweeps")]
    IterationLimit { sweeps: usize },

    #[error("state could not be assigned a parity (expectation {expectation})")]
    Unclassified { expectation: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),
}

impl Error {
    /// True for the two pole-guard errors.
    pub fn is_pole(&self) -> bool {
        matches!(self, Error::SingletPole { .. } | Error::DisplacedPole { .. })
    }
}
