//! Parity labels for oracle eigenvectors.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::Parity;
use crate::oracle::hamiltonian::apply_parity;

/// `|⟨Π⟩|` below this leaves a state unclassified.
pub const MIN_PARITY_EXPECTATION: f64 = 0.999;

/// Eigenvalues closer than this (relative to `max(1, |E|)`) are treated as
/// one degenerate cluster when resolving parity.
pub const CLUSTER_TOL: f64 = 1e-8;

pub fn parity_expectation(v: &DVector<f64>, n_fock: usize) -> f64 {
    v.dot(&apply_parity(v, n_fock)) / v.norm_squared()
}

/// Even for `⟨Π⟩ > 0`, odd for `⟨Π⟩ < 0`; `Unclassified` when
/// `|⟨Π⟩| < 0.999`.
pub fn parity_classify(v: &DVector<f64>, n_fock: usize) -> Result<(Parity, f64)> {
    let expectation = parity_expectation(v, n_fock);
    if !(expectation.abs() >= MIN_PARITY_EXPECTATION) {
        return Err(Error::Unclassified { expectation });
    }
    let parity = if expectation > 0.0 { Parity::Even } else { Parity::Odd };
    Ok((parity, expectation))
}

/// Rotates every cluster of (near-)degenerate eigenvectors onto eigenvectors
/// of `Π` inside the cluster, so that each column has a definite parity.
/// Non-degenerate columns are left untouched.
pub fn resolve_degenerate_parity(values: &[f64], vectors: &mut DMatrix<f64>, n_fock: usize) {
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] <= CLUSTER_TOL * values[end].abs().max(1.0) {
            end += 1;
        }
        if end - start > 1 {
            let block = vectors.columns(start, end - start).into_owned();
            let k = block.ncols();
            let pb = DMatrix::from_columns(
                &(0..k).map(|j| apply_parity(&block.column(j).into_owned(), n_fock)).collect::<Vec<_>>(),
            );
            let small = block.transpose() * pb;
            let small = (&small + small.transpose()) * 0.5;
            let eig = small.symmetric_eigen();
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
            let rotated = &block * eig.eigenvectors;
            for (j, &src) in order.iter().enumerate() {
                vectors.set_column(start + j, &rotated.column(src));
            }
        }
        start = end;
    }
}
