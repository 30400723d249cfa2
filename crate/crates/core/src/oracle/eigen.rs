//! Dense symmetric eigendecomposition with per-pair residuals.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Iteration budget handed to the implicit QR iteration.
pub const MAX_ITERATIONS: usize = 10_000;

/// Residual contract: `‖Hv − Ev‖ ≤ RESIDUAL_BOUND · ‖H‖_F`.
pub const RESIDUAL_BOUND: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal columns, in the order of `values`.
    pub vectors: DMatrix<f64>,
    /// `‖Hv − Ev‖` per pair.
    pub residuals: Vec<f64>,
}

impl EigenSolution {
    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }
}

/// Full spectrum of a symmetric matrix, sorted ascending.
pub fn diagonalize(matrix: &DMatrix<f64>) -> Result<EigenSolution> {
    let eig = matrix
        .clone()
        .try_symmetric_eigen(f64::EPSILON, MAX_ITERATIONS)
        .ok_or(Error::IterationLimit { sweeps: MAX_ITERATIONS })?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(matrix.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    let residuals = residual_norms(matrix, &values, &vectors);
    let bound = RESIDUAL_BOUND * matrix.norm().max(1.0);
    if residuals.iter().any(|r| !(*r <= bound)) {
        return Err(Error::IterationLimit { sweeps: MAX_ITERATIONS });
    }
    Ok(EigenSolution { values, vectors, residuals })
}

pub(crate) fn residual_norms(matrix: &DMatrix<f64>, values: &[f64], vectors: &DMatrix<f64>) -> Vec<f64> {
    let hv = matrix * vectors;
    values
        .iter()
        .enumerate()
        .map(|(i, &e)| (hv.column(i) - vectors.column(i) * e).norm())
        .collect()
}
