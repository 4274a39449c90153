//! Reference engines: adaptive integration of the coupled-mode equations and
//! dense matrix exponentials on truncated Fock space.

mod expm;
mod fock;
mod ode;

pub use expm::{expm, expm_real, matrix_exp_oracle, MAX_ORACLE_DIM};
pub use fock::{block_max_abs, commutator, lattice_generator, CMatrix, FockOperators};
pub use ode::{
    edge_leak, integrate, integrate_from, rhs, truncation_check, FieldState, IntegratorConfig,
    IntegratorStats, OdeSystem, EDGE_BAND, MIN_STEP,
};
