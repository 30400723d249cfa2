//! The `j = 1` Hamiltonian in the rotated spin basis, truncated in photon
//! number, and the parity operator acting on it.

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A real symmetric matrix on the basis `(spin row r ∈ {0,1,2}) × (photon
/// n ∈ 0..=n_fock)`, index `r (n_fock + 1) + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetricMatrix {
    pub n_fock: usize,
    pub data: DMatrix<f64>,
}

impl DenseSymmetricMatrix {
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn index(&self, row: usize, n: usize) -> usize {
        basis_index(self.n_fock, row, n)
    }

    pub fn trace(&self) -> f64 {
        self.data.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }
}

pub fn basis_index(n_fock: usize, row: usize, n: usize) -> usize {
    row * (n_fock + 1) + n
}

/// Diagonal blocks `n + g(d† + d)`, `n`, `n − g(d† + d)`; rows 0–1 and 1–2
/// coupled by `−Δ/√2` at equal photon number. `g = 0` and `Δ = 0` are
/// allowed here.
pub fn build_hamiltonian(delta: f64, g: f64, n_fock: usize) -> Result<DenseSymmetricMatrix> {
    if n_fock < 1 {
        return Err(Error::InvalidParams("n_fock must be >= 1".into()));
    }
    if !delta.is_finite() || !g.is_finite() || delta < 0.0 || g < 0.0 {
        return Err(Error::InvalidParams(format!("need finite delta >= 0 and g >= 0, got ({delta}, {g})")));
    }
    let size = 3 * (n_fock + 1);
    let mut h = DMatrix::zeros(size, size);
    let idx = |r: usize, n: usize| basis_index(n_fock, r, n);
    let coupling = -delta / SQRT_2;
    for n in 0..=n_fock {
        for r in 0..3 {
            h[(idx(r, n), idx(r, n))] = n as f64;
        }
        if n < n_fock {
            let hop = g * ((n + 1) as f64).sqrt();
            for (r, sign) in [(0usize, 1.0), (2, -1.0)] {
                let (i, j) = (idx(r, n), idx(r, n + 1));
                h[(i, j)] = sign * hop;
                h[(j, i)] = sign * hop;
            }
        }
        for (a, b) in [(0usize, 1usize), (1, 2)] {
            let (i, j) = (idx(a, n), idx(b, n));
            h[(i, j)] = coupling;
            h[(j, i)] = coupling;
        }
    }
    Ok(DenseSymmetricMatrix { n_fock, data: h })
}

/// `Π v` with `Π` = (swap rows 0 and 2, keep row 1) ⊗ `(−1)^n`.
pub fn apply_parity(v: &DVector<f64>, n_fock: usize) -> DVector<f64> {
    let mut out = DVector::zeros(v.len());
    for n in 0..=n_fock {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let (i0, i1, i2) = (basis_index(n_fock, 0, n), basis_index(n_fock, 1, n), basis_index(n_fock, 2, n));
        out[i0] = sign * v[i2];
        out[i1] = sign * v[i1];
        out[i2] = sign * v[i0];
    }
    out
}

/// `Π` as a dense matrix.
pub fn parity_matrix(n_fock: usize) -> DMatrix<f64> {
    let size = 3 * (n_fock + 1);
    let mut p = DMatrix::zeros(size, size);
    for n in 0..=n_fock {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let (i0, i1, i2) = (basis_index(n_fock, 0, n), basis_index(n_fock, 1, n), basis_index(n_fock, 2, n));
        p[(i0, i2)] = sign;
        p[(i2, i0)] = sign;
        p[(i1, i1)] = sign;
    }
    p
}
