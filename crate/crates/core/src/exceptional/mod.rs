//! Exceptional solutions at `E = m - g^2` and the singlet levels `E = n`.

pub mod condition;
pub mod laguerre;
pub mod singlet;

pub use condition::{
    condition_terms, exceptional_condition, exceptional_condition_direct, exceptional_condition_series,
    find_exceptional_g, singlet_crossing_couplings, type2_g2, ConditionRoute, ConditionValue, ExceptionalOptions,
    ExceptionalPoint, CONDITION_MAX_TERMS,
};
pub use laguerre::{d_element, laguerre_assoc, laguerre_general, ln_factorial, DMatrixElement};
pub use singlet::{singlet_spectrum, verify_singlet_pole_not_exceptional, SingletLevel, SingletPoleReport};
