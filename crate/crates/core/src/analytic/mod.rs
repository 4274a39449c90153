//! Closed-form propagation: scalar frame functions, normal-ordering of the
//! squeeze propagator, Fock-basis matrix elements and full amplitude rows.

mod amplitude;
mod disentangle;
mod elements;
mod frame;

pub use amplitude::{
    amplitude, amplitude_by_elements, apply_squeeze, branch, displaced_ladder, dsn_distribution,
    propagated_column, AmplitudeRow, Branch, CEILING_FACTOR, TAIL_REL_TOL, TAIL_RUN,
};
pub use disentangle::{disentangle, DisentangleFns, PARABOLIC_TOL};
pub use elements::{displacement_element, squeeze_element};
pub use frame::{
    eval_eta, eval_eta_critical, eval_g1_g0, eval_g1_g0_critical, eval_nu, ScalarFrame,
    SqueezeFactors,
};
