//! The spin-singlet levels `E = n` and the check that the singlet poles of
//! `G` never host a `j = 1` eigenvalue.

use crate::error::{Error, Result};
use crate::model::Parity;
use crate::oracle::spectrum::{oracle_spectrum, DEFAULT_N_FOCK};

/// A `j = 0` level: photon number `n` with the qubits in the singlet,
/// decoupled from the cavity for every `Δ` and `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingletLevel {
    pub n: usize,
    pub energy: f64,
}

pub fn singlet_spectrum(n_max: usize) -> Vec<SingletLevel> {
    (0..=n_max).map(|n| SingletLevel { n, energy: n as f64 }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingletPoleReport {
    pub delta: f64,
    pub n: usize,
    pub g_probe: f64,
    /// Sector whose `G` has the pole at `E = n`.
    pub parity: Parity,
    /// Closest `j = 1` eigenvalue of that sector, if any lies in range.
    pub nearest: Option<f64>,
    pub min_distance: f64,
}

/// Distance from `E = n` to the nearest `j = 1` eigenvalue of the parity
/// that matches `n`, from the oracle at `(Δ, g_probe)`.
pub fn verify_singlet_pole_not_exceptional(delta: f64, n: usize, g_probe: f64) -> Result<SingletPoleReport> {
    if !(g_probe > 0.0) {
        return Err(Error::InvalidParams(format!("g_probe must be > 0, got {g_probe}")));
    }
    let parity = if n % 2 == 0 { Parity::Even } else { Parity::Odd };
    let target = n as f64;
    let window = (target - 2.0 - g_probe * g_probe - delta, target + 2.0);
    let spectrum = oracle_spectrum(delta, g_probe, DEFAULT_N_FOCK, window, false)?;
    let nearest = spectrum
        .energies(parity)
        .into_iter()
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()));
    let min_distance = nearest.map_or(f64::INFINITY, |e| (e - target).abs());
    Ok(SingletPoleReport { delta, n, g_probe, parity, nearest, min_distance })
}
