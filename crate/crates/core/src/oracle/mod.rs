//! Independent reference: the `j = 1` Hamiltonian in a truncated Fock basis,
//! diagonalized densely, with parity labels.

pub mod ansatz;
pub mod compare;
pub mod eigen;
pub mod hamiltonian;
pub mod parity;
pub mod spectrum;

pub use ansatz::{ansatz_amplitudes, fock_ansatz_vector, relative_residual};
pub use compare::{compare_levels, Comparison, MatchEntry, MatchStatus, DEFAULT_POLE_EXCLUSION};
pub use eigen::{diagonalize, EigenSolution, RESIDUAL_BOUND};
pub use hamiltonian::{apply_parity, basis_index, build_hamiltonian, parity_matrix, DenseSymmetricMatrix};
pub use parity::{parity_classify, parity_expectation, resolve_degenerate_parity, MIN_PARITY_EXPECTATION};
pub use spectrum::{
    oracle_spectrum, trusted_top, zero_coupling_spectrum, zero_splitting_spectrum, OracleLevel, OracleSpectrum,
    DEFAULT_N_FOCK,
};
