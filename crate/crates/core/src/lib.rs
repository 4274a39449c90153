//! Light propagation in a semi-infinite zigzag waveguide array with first-
//! and second-neighbour coupling and a linear propagation-constant gradient.
//!
//! Two independent engines are provided: [`analytic`] evaluates the exact
//! closed-form amplitudes built from displacement and su(1,1) squeeze
//! propagators, and [`numeric`] integrates the coupled-mode equations with an
//! adaptive Runge-Kutta-Fehlberg scheme (plus dense matrix-exponential
//! oracles on truncated Fock space). [`harness`] turns either into intensity
//! maps, comparison reports and Bloch-period estimates.

pub mod analytic;
pub mod error;
pub mod exec;
pub mod harness;
pub mod lattice;
pub mod numeric;
pub mod special;

pub use error::{Error, Result};
pub use exec::Exec;
pub use lattice::{classify_regime, LatticeParams, PhysicalLattice, Regime, RegimeKind};
