//! Exact spectrum of the two-qubit quantum Rabi model (the `N = 2` Dicke
//! model) from a single-variable spectral function.
//!
//! * [`series`] evaluates the coefficient recurrences and `G_±(E)`.
//! * [`roots`] locates the zeros of `G` between poles and sweeps them in `g`.
//! * [`exceptional`] solves for the isolated solutions at `E = m - g^2` and
//!   analyses the singlet poles at `E = n`.
//! * [`oracle`] is an independent truncated-Fock-basis diagonalization.

pub mod error;
pub mod exceptional;
pub mod model;
pub mod oracle;
pub mod roots;
pub mod series;

pub use error::{Error, Result};
pub use model::{ModelParams, Parity, SeriesConfig, EPS_POLE};
