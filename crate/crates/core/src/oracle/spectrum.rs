//! Parity-labelled reference spectra from the truncated basis.

use crate::error::{Error, Result};
use crate::model::Parity;
use crate::oracle::eigen::diagonalize;
use crate::oracle::hamiltonian::build_hamiltonian;
use crate::oracle::parity::{parity_classify, resolve_degenerate_parity};

pub const DEFAULT_N_FOCK: usize = 100;

/// Photon-number reduction of the comparison run used for the convergence
/// estimate.
pub const CONVERGENCE_STEP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleLevel {
    pub energy: f64,
    pub parity: Parity,
    /// `⟨Π⟩`, ±1 up to truncation effects.
    pub expectation: f64,
    /// `‖Hv − Ev‖`.
    pub residual: f64,
    /// Change of the level against the `n_fock − 20` run, when requested.
    pub shift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    pub delta: f64,
    pub g: f64,
    pub n_fock: usize,
    pub window: (f64, f64),
    /// Ascending in energy.
    pub levels: Vec<OracleLevel>,
    /// Energies in the window whose parity could not be assigned.
    pub unclassified: Vec<f64>,
}

impl OracleSpectrum {
    pub fn energies(&self, parity: Parity) -> Vec<f64> {
        self.levels.iter().filter(|l| l.parity == parity).map(|l| l.energy).collect()
    }

    pub fn max_shift(&self) -> Option<f64> {
        self.levels.iter().filter_map(|l| l.shift).reduce(f64::max)
    }
}

/// Top of the window in which truncation error is trusted.
pub fn trusted_top(n_fock: usize) -> f64 {
    n_fock as f64 / 2.0
}

/// Eigenvalues in `[lo, hi]` with parity labels. The window must lie below
/// `n_fock / 2`. With `convergence` set, each level also carries its shift
/// relative to a run with `n_fock − 20` photons.
pub fn oracle_spectrum(
    delta: f64,
    g: f64,
    n_fock: usize,
    window: (f64, f64),
    convergence: bool,
) -> Result<OracleSpectrum> {
    if !(window.1 > window.0) {
        return Err(Error::InvalidParams(format!("empty window {window:?}")));
    }
    if window.1 > trusted_top(n_fock) {
        return Err(Error::InvalidParams(format!(
            "window top {} exceeds the trusted limit n_fock/2 = {}",
            window.1,
            trusted_top(n_fock)
        )));
    }
    let (mut levels, unclassified) = labelled_levels(delta, g, n_fock, window)?;
    if convergence {
        let coarse_n = n_fock.saturating_sub(CONVERGENCE_STEP).max(1);
        let pad = (window.0 - 1.0, (window.1 + 1.0).min(trusted_top(coarse_n).max(window.1)));
        let (coarse, _) = labelled_levels(delta, g, coarse_n, pad)?;
        for level in &mut levels {
            level.shift = coarse
                .iter()
                .filter(|c| c.parity == level.parity)
                .map(|c| (c.energy - level.energy).abs())
                .reduce(f64::min);
        }
    }
    Ok(OracleSpectrum { delta, g, n_fock, window, levels, unclassified })
}

fn labelled_levels(delta: f64, g: f64, n_fock: usize, window: (f64, f64)) -> Result<(Vec<OracleLevel>, Vec<f64>)> {
    let h = build_hamiltonian(delta, g, n_fock)?;
    let mut sol = diagonalize(&h.data)?;
    resolve_degenerate_parity(&sol.values, &mut sol.vectors, n_fock);
    let mut levels = Vec::new();
    let mut unclassified = Vec::new();
    for (i, &energy) in sol.values.iter().enumerate() {
        if energy < window.0 || energy > window.1 {
            continue;
        }
        match parity_classify(&sol.vector(i), n_fock) {
            Ok((parity, expectation)) => {
                levels.push(OracleLevel { energy, parity, expectation, residual: sol.residuals[i], shift: None })
            }
            Err(_) => unclassified.push(energy),
        }
    }
    Ok((levels, unclassified))
}

/// `Δ = 0`: each displaced block gives `n − g²` (rows 0 and 2) and the
/// middle row gives `n`. Sorted, restricted to `E ≤ e_max`.
pub fn zero_splitting_spectrum(g: f64, e_max: f64) -> Vec<f64> {
    let g2 = g * g;
    let mut out = Vec::new();
    let mut n = 0usize;
    while n as f64 - g2 <= e_max {
        out.push(n as f64 - g2);
        out.push(n as f64 - g2);
        if n as f64 <= e_max {
            out.push(n as f64);
        }
        n += 1;
    }
    out.sort_by(f64::total_cmp);
    out
}

/// `g = 0`: `n + Δ m` with `m ∈ {−1, 0, 1}`, sorted, `E ≤ e_max`.
pub fn zero_coupling_spectrum(delta: f64, e_max: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut n = 0usize;
    while n as f64 - delta <= e_max {
        for m in [-1.0, 0.0, 1.0] {
            let e = n as f64 + delta * m;
            if e <= e_max {
                out.push(e);
            }
        }
        n += 1;
    }
    out.sort_by(f64::total_cmp);
    out
}
