//! The parity ansatz `(a_n, b_n, ±(−1)^n a_n)` as a vector in the oracle
//! basis.
//!
//! At an eigenvalue the physical `a_n` is the minimal solution of the
//! three-term recurrence, which forward iteration from `a_0` cannot follow.
//! It is generated here by backward (Miller) recurrence in
//! `x_n = sqrt(n!) a_n` and normalised to `x_0 = 1`. Every row equation
//! except the `n = 0` boundary then holds by construction, so the residual
//! against the matrix measures how close `E` is to an eigenvalue.

use nalgebra::DVector;

use crate::error::Result;
use crate::model::{ModelParams, Parity};
use crate::oracle::hamiltonian::{basis_index, DenseSymmetricMatrix};
use crate::series::fock::check_singlet_poles;

/// Extra indices run above the truncation before the backward sweep starts.
const MILLER_HEADROOM: usize = 60;

const RESCALE_ABOVE: f64 = 1e150;

/// Ansatz amplitudes `x_n = sqrt(n!) a_n` for `n = 0..=n_trunc`, `x_0 = 1`.
pub fn ansatz_amplitudes(params: &ModelParams, parity: Parity, energy: f64, n_trunc: usize) -> Result<Vec<f64>> {
    let start = n_trunc + MILLER_HEADROOM;
    check_singlet_poles(parity, energy, start, crate::model::EPS_POLE)?;
    let g = params.g();
    let d2 = params.delta() * params.delta();
    let mut x = vec![0.0; start + 2];
    x[start] = 1.0;
    for m in (1..=start).rev() {
        let mf = m as f64;
        let singlet = if parity.matches(m) { d2 / (energy - mf) } else { 0.0 };
        let diag = energy - mf - singlet;
        x[m - 1] = (diag * x[m] - g * (mf + 1.0).sqrt() * x[m + 1]) / (g * mf.sqrt());
        if x[m - 1].abs() > RESCALE_ABOVE {
            for v in &mut x[m - 1..] {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    let x0 = x[0];
    x.truncate(n_trunc + 1);
    for v in &mut x {
        *v /= x0;
    }
    Ok(x)
}

/// The ansatz truncated at `n_trunc`, embedded in the `n_fock` basis.
pub fn fock_ansatz_vector(
    params: &ModelParams,
    parity: Parity,
    energy: f64,
    n_trunc: usize,
    n_fock: usize,
) -> Result<DVector<f64>> {
    let n_trunc = n_trunc.min(n_fock);
    let x = ansatz_amplitudes(params, parity, energy, n_trunc)?;
    let s = parity.sign();
    let c = params.coupling();
    let mut psi = DVector::zeros(3 * (n_fock + 1));
    for (n, &xn) in x.iter().enumerate() {
        let alt = if n % 2 == 0 { 1.0 } else { -1.0 };
        psi[basis_index(n_fock, 0, n)] = xn;
        if parity.matches(n) {
            psi[basis_index(n_fock, 1, n)] = -c * 2.0 / (energy - n as f64) * xn;
        }
        psi[basis_index(n_fock, 2, n)] = s * alt * xn;
    }
    Ok(psi)
}

/// `‖Hψ − Eψ‖ / ‖ψ‖`.
pub fn relative_residual(h: &DenseSymmetricMatrix, psi: &DVector<f64>, energy: f64) -> f64 {
    (&h.data * psi - psi * energy).norm() / psi.norm()
}
