//! Zeros of `G` between its poles, and parameter sweeps over `g`.

pub mod poles;
pub mod sweep;
pub mod zeros;

pub use poles::{nearest_pole, pole_grid, Pole, PoleDistance, PoleKind};
pub use sweep::{level_crossings, sweep_spectrum, Crossing, Level, SpectrumResult, SweepPoint};
pub use zeros::{find_zeros, Root, SampleFailure, ZeroOptions, ZeroSearch};
