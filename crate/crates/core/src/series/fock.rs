//! Fock-basis coefficients `a_m`, `b_m` of the parity ansatz.
//!
//! The forward recurrence produces the dominant solution, which grows like
//! `(1/g)^m`. Coefficients are therefore stored pre-multiplied by `(-g)^m`;
//! in that form the terms of the displaced-vacuum projections are the
//! stored values themselves and decay like a power law.

use crate::error::{Error, Result};
use crate::model::{ModelParams, Parity};

#[derive(Debug, Clone, PartialEq)]
pub struct FockCoeffs {
    pub energy: f64,
    pub parity: Parity,
    g: f64,
    scaled_a: Vec<f64>,
    scaled_b: Vec<f64>,
}

impl FockCoeffs {
    /// Highest stored index `K`.
    pub fn truncation(&self) -> usize {
        self.scaled_a.len() - 1
    }

    /// `a_m (-g)^m`.
    pub fn scaled_a(&self) -> &[f64] {
        &self.scaled_a
    }

    /// `b_m (-g)^m`.
    pub fn scaled_b(&self) -> &[f64] {
        &self.scaled_b
    }

    /// Unscaled `a_m`; overflows to infinity for large `m` at small `g`.
    pub fn a(&self, m: usize) -> f64 {
        self.scaled_a[m] / (-self.g).powi(m as i32)
    }

    /// Unscaled `b_m`.
    pub fn b(&self, m: usize) -> f64 {
        self.scaled_b[m] / (-self.g).powi(m as i32)
    }
}

/// Checks `E` against the parity-matched singlet poles `E = n`, `n ≤ max_n`.
pub(crate) fn check_singlet_poles(parity: Parity, energy: f64, max_n: usize, eps_pole: f64) -> Result<()> {
    let nearest = energy.round();
    if nearest < 0.0 || nearest > max_n as f64 {
        return Ok(());
    }
    let n = nearest as usize;
    if parity.matches(n) && (energy - nearest).abs() < eps_pole {
        return Err(Error::SingletPole { n, energy });
    }
    Ok(())
}

/// Runs the three-term recurrence for `a_m` from `a_0 = 1` up to index `k_max`
/// and derives `b_m` from it.
pub fn fock_recurrence(
    params: &ModelParams,
    parity: Parity,
    energy: f64,
    k_max: usize,
    eps_pole: f64,
) -> Result<FockCoeffs> {
    if k_max < 1 {
        return Err(Error::InvalidParams("truncation K must be >= 1".into()));
    }
    check_singlet_poles(parity, energy, k_max, eps_pole)?;
    Ok(fock_recurrence_unchecked(params, parity, energy, k_max))
}

pub(crate) fn fock_recurrence_unchecked(params: &ModelParams, parity: Parity, energy: f64, k_max: usize) -> FockCoeffs {
    let g2 = params.g2();
    let delta2 = params.delta() * params.delta();
    let coupling = params.coupling();

    // With c_m = a_m (-g)^m the recurrence reads
    // c_{m+1} = -(A_m c_m + g^2 c_{m-1}) / (m + 1).
    let mut a = Vec::with_capacity(k_max + 1);
    let mut b = Vec::with_capacity(k_max + 1);
    let mut prev = 0.0;
    let mut cur = 1.0;
    for m in 0..=k_max {
        let mf = m as f64;
        let matched = parity.matches(m);
        a.push(cur);
        b.push(if matched { -coupling * 2.0 / (energy - mf) * cur } else { 0.0 });
        if m == k_max {
            break;
        }
        let singlet = if matched { delta2 / (energy - mf) } else { 0.0 };
        let diag = energy - mf - singlet;
        let next = -(diag * cur + g2 * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
    }
    FockCoeffs { energy, parity, g: params.g(), scaled_a: a, scaled_b: b }
}
