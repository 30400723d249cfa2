//! Coefficient recurrences and the `G`-function.

pub mod displaced;
pub mod fock;
pub mod gfunc;
pub mod tail;

pub use displaced::{displaced_recurrence, displaced_seed, DisplacedCoeffs, DisplacedSeed};
pub use fock::{fock_recurrence, FockCoeffs};
pub use gfunc::{domain_lower_bound, g_function, g_function_at, GEvaluation};
