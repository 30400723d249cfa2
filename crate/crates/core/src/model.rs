//! Model parameters, parity sectors and numerical settings shared by all
//! solvers.
//!
//! Energies are measured in units of the cavity frequency (`ω = 1`).

use std::f64::consts::SQRT_2;
use std::fmt;

use crate::error::{Error, Result};

/// Qubit splitting `Δ` and effective coupling `g = 2λ/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    delta: f64,
    g: f64,
}

impl ModelParams {
    /// `g` must be strictly positive and `Δ` non-negative. The decoupled
    /// point `g = 0` is served by the closed forms in [`crate::oracle`].
    pub fn new(delta: f64, g: f64) -> Result<Self> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::InvalidParams(format!("delta must be finite and >= 0, got {delta}")));
        }
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::InvalidParams(format!("g must be finite and > 0, got {g}")));
        }
        Ok(Self { delta, g })
    }

    /// Builds the parameters from the bare atom-cavity coupling `λ`.
    pub fn from_lambda(delta: f64, lambda: f64) -> Result<Self> {
        Self::new(delta, SQRT_2 * lambda)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn g2(&self) -> f64 {
        self.g * self.g
    }

    pub fn lambda(&self) -> f64 {
        self.g / SQRT_2
    }

    /// The qubit coupling `Δ/√2` appearing in every off-diagonal block.
    pub fn coupling(&self) -> f64 {
        self.delta / SQRT_2
    }
}

/// Z2 parity sector of the `j = 1` problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    /// `s = +1` for even, `-1` for odd.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    /// `[1 + s(-1)^m]`: exactly 2 when `m` matches the sector, exactly 0
    /// otherwise.
    pub fn bracket(self, m: usize) -> f64 {
        if self.matches(m) {
            2.0
        } else {
            0.0
        }
    }

    /// Whether integer `n` has the parity of this sector.
    pub fn matches(self, n: usize) -> bool {
        (n % 2 == 0) == (self == Parity::Even)
    }

    pub fn opposite(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" | "+" => Ok(Parity::Even),
            "odd" | "-" => Ok(Parity::Odd),
            other => Err(Error::InvalidParams(format!("unknown parity '{other}'"))),
        }
    }
}

/// Default absolute pole guard in `E`.
pub const EPS_POLE: f64 = 1e-8;

/// Truncation and guard settings for every series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Target accuracy, relative to `max(1, |value|)`.
    pub tol: f64,
    /// Highest series index evaluated, so at most `max_terms + 1` terms.
    pub max_terms: usize,
    /// Absolute distance in `E` under which a pole error is returned.
    pub eps_pole: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_terms: 20_000, eps_pole: EPS_POLE }
    }
}

impl SeriesConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_selects_matching_indices() {
        for m in 0..10 {
            let even = Parity::Even.bracket(m);
            let odd = Parity::Odd.bracket(m);
            assert_eq!(even + odd, 2.0);
            assert_eq!(even == 2.0, m % 2 == 0);
        }
    }

    #[test]
    fn rejects_non_positive_coupling() {
        assert!(ModelParams::new(0.5, 0.0).is_err());
        assert!(ModelParams::new(-0.1, 0.5).is_err());
        assert!(ModelParams::new(0.5, f64::NAN).is_err());
        assert!(ModelParams::new(0.0, 0.3).is_ok());
    }

    #[test]
    fn lambda_round_trip() {
        let p = ModelParams::from_lambda(0.5, 0.3).unwrap();
        assert!((p.g() - 2.0 * 0.3 / SQRT_2).abs() < 1e-15);
        assert!((p.lambda() - 0.3).abs() < 1e-15);
    }
}
