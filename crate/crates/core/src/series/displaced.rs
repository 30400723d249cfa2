//! Coefficients of the expansion in displaced (extended coherent) states.
//!
//! Stored as `u_n g^n`, `v_n g^n`, `w_n g^n`; in that form the `G` series
//! is the plain sum of `U_n - s W_n`.

use crate::error::{Error, Result};
use crate::model::{ModelParams, Parity, SeriesConfig};
use crate::series::fock::{check_singlet_poles, fock_recurrence_unchecked, FockCoeffs};
use crate::series::tail::{extrapolated_sum, magnitude};

/// The `n = 0` coefficients, with the constants `r'` and `e^{-g^2/2}` dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacedSeed {
    pub u0: f64,
    pub v0: f64,
    pub w0: f64,
    pub terms_used: usize,
    pub tail_estimate: f64,
}

impl DisplacedSeed {
    /// Projects the Fock coefficients onto the displaced vacuum using every
    /// stored term plus the extrapolated remainder.
    pub fn from_fock(params: &ModelParams, fock: &FockCoeffs) -> Self {
        Self::from_prefix(params, fock, fock.truncation())
    }

    pub(crate) fn from_prefix(params: &ModelParams, fock: &FockCoeffs, upto: usize) -> Self {
        let p = 1.0 + fock.energy + params.g2();
        let a = &fock.scaled_a()[..=upto];
        let b = &fock.scaled_b()[..=upto];
        let alternating: Vec<f64> =
            a.iter().enumerate().map(|(k, c)| if k % 2 == 0 { *c } else { -*c }).collect();
        Self {
            u0: extrapolated_sum(a, p),
            v0: extrapolated_sum(b, p + 1.0),
            w0: fock.parity.sign() * extrapolated_sum(&alternating, p),
            terms_used: upto + 1,
            tail_estimate: 0.0,
        }
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.u0 - other.u0).abs().max((self.v0 - other.v0).abs()).max((self.w0 - other.w0).abs())
    }

    fn scale(&self) -> f64 {
        self.u0.abs().max(self.v0.abs()).max(self.w0.abs())
    }
}

/// Adaptive evaluation of the seed sums.
pub fn displaced_seed(params: &ModelParams, parity: Parity, energy: f64, cfg: &SeriesConfig) -> Result<DisplacedSeed> {
    let lower = -params.g2();
    if energy <= lower {
        return Err(Error::OutOfDomain { energy, lower });
    }
    check_singlet_poles(parity, energy, cfg.max_terms, cfg.eps_pole)?;

    let mut n = initial_terms(cfg.max_terms);
    loop {
        let fock = fock_recurrence_unchecked(params, parity, energy, n);
        let full = DisplacedSeed::from_prefix(params, &fock, n);
        let half = DisplacedSeed::from_prefix(params, &fock, n / 2);
        let floor = 16.0 * f64::EPSILON * magnitude(fock.scaled_a()).max(magnitude(fock.scaled_b()));
        let estimate = full.max_abs_diff(&half) + floor;
        if estimate <= cfg.tol * full.scale().max(1.0) {
            return Ok(DisplacedSeed { tail_estimate: estimate, ..full });
        }
        if n >= cfg.max_terms {
            return Err(Error::NoConvergence { terms: n + 1, estimate });
        }
        n = (2 * n).min(cfg.max_terms);
    }
}

pub(crate) fn initial_terms(max_terms: usize) -> usize {
    256.min(max_terms).max(2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisplacedCoeffs {
    pub energy: f64,
    pub parity: Parity,
    g: f64,
    u: Vec<f64>,
    v: Vec<f64>,
    w: Vec<f64>,
}

impl DisplacedCoeffs {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `u_n g^n`.
    pub fn scaled_u(&self) -> &[f64] {
        &self.u
    }

    /// `v_n g^n`.
    pub fn scaled_v(&self) -> &[f64] {
        &self.v
    }

    /// `w_n g^n`.
    pub fn scaled_w(&self) -> &[f64] {
        &self.w
    }

    pub fn u(&self, n: usize) -> f64 {
        self.u[n] / self.g.powi(n as i32)
    }

    pub fn v(&self, n: usize) -> f64 {
        self.v[n] / self.g.powi(n as i32)
    }

    pub fn w(&self, n: usize) -> f64 {
        self.w[n] / self.g.powi(n as i32)
    }

    /// Terms `(u_n - s w_n) g^n` of the `G` series.
    pub fn g_terms(&self) -> Vec<f64> {
        let s = self.parity.sign();
        self.u.iter().zip(&self.w).map(|(u, w)| u - s * w).collect()
    }

    /// `G` summed over the stored terms plus the extrapolated remainder.
    pub fn g_sum(&self) -> f64 {
        extrapolated_sum(&self.g_terms(), 2.0 + self.energy)
    }
}

pub(crate) fn check_displaced_poles(params: &ModelParams, energy: f64, max_n: usize, eps_pole: f64) -> Result<()> {
    let shifted = energy + params.g2();
    let nearest = shifted.round();
    if nearest < 1.0 || nearest > max_n as f64 {
        return Ok(());
    }
    // Compare on the E axis, where the guard is defined.
    if (energy - (nearest - params.g2())).abs() < eps_pole {
        return Err(Error::DisplacedPole { n: nearest as usize, energy });
    }
    Ok(())
}

/// Generates `u_n, v_n, w_n` for `n = 0..=n_max` from the seeds.
pub fn displaced_recurrence(
    params: &ModelParams,
    parity: Parity,
    energy: f64,
    n_max: usize,
    seed: &DisplacedSeed,
    eps_pole: f64,
) -> Result<DisplacedCoeffs> {
    check_displaced_poles(params, energy, n_max, eps_pole)?;
    Ok(displaced_recurrence_unchecked(params, parity, energy, n_max, seed))
}

pub(crate) fn displaced_recurrence_unchecked(
    params: &ModelParams,
    parity: Parity,
    energy: f64,
    n_max: usize,
    seed: &DisplacedSeed,
) -> DisplacedCoeffs {
    let g2 = params.g2();
    let c = params.coupling();
    let mut u = Vec::with_capacity(n_max + 1);
    let mut v = Vec::with_capacity(n_max + 1);
    let mut w = Vec::with_capacity(n_max + 1);
    u.push(seed.u0);
    v.push(seed.v0);
    w.push(seed.w0);
    for n in 1..=n_max {
        let nf = n as f64;
        let (v2, w2) = if n >= 2 { (v[n - 2], w[n - 2]) } else { (0.0, 0.0) };
        let vn = -((energy - g2 - nf + 1.0) * v[n - 1] + c * (u[n - 1] + w[n - 1]) + g2 * v2) / nf;
        let wn = -((energy - 3.0 * g2 - nf + 1.0) * w[n - 1] + c * v[n - 1] + 2.0 * g2 * w2) / (2.0 * nf);
        let un = -c * vn / (energy - nf + g2);
        u.push(un);
        v.push(vn);
        w.push(wn);
    }
    DisplacedCoeffs { energy, parity, g: params.g(), u, v, w }
}
