//! Scalar auxiliary functions of the closed-form propagator.
//!
//! Everything is expressed through the two real, even-in-Gamma functions
//! `cosh(Gamma Z)` and `sinh(Gamma Z)/Gamma`, so the hyperbolic and
//! trigonometric regimes share one code path and no complex square root of
//! `4 alpha2^2 - lambda^2` is ever taken.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{LatticeParams, RegimeKind};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Displacement, phase and squeeze coefficients at one propagation distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarFrame {
    /// `alpha1 / (lambda + 2 alpha2)`; infinite when the denominator vanishes
    /// (only reachable with `alpha2 = 0`, where the frame is not used).
    pub beta: f64,
    /// Displacement accumulated by the squeeze propagator; the field at `Z`
    /// is `exp(-nu/2) U(Z) D(-eta) |n0>`.
    pub eta: Complex64,
    pub nu: Complex64,
    /// Coefficient of `K+` and `K-` in the normal-ordered propagator.
    pub g1: Complex64,
    /// Coefficient of `K0`, on the branch continuous in `Z` from `g0(0) = 0`.
    pub g0: Complex64,
    pub gamma: Complex64,
}

impl ScalarFrame {
    /// Evaluates the frame, dispatching on the regime.
    pub fn new(params: &LatticeParams, z: f64) -> Result<Self> {
        let regime = params.regime();
        let (eta, nu, (g1, g0)) = match regime.kind {
            RegimeKind::Critical => (
                eval_eta_critical(params, z)?,
                eval_nu(params, z)?,
                eval_g1_g0_critical(params, z)?,
            ),
            _ => (
                eval_eta(params, z)?,
                eval_nu(params, z)?,
                eval_g1_g0(params, z)?,
            ),
        };
        Ok(Self {
            beta: if params.alpha1 == 0.0 {
                0.0
            } else {
                params.alpha1 / (params.lambda + 2.0 * params.alpha2)
            },
            eta,
            nu,
            g1,
            g0,
            gamma: regime.gamma,
        })
    }

    /// Factors consumed by the squeeze matrix-element kernels.
    pub fn squeeze_factors(&self) -> SqueezeFactors {
        SqueezeFactors {
            half_g1: self.g1 * 0.5,
            ratio: (self.g0 * 0.5).exp(),
            quarter: (self.g0 * 0.25).exp(),
        }
    }
}

/// `g1/2`, `exp(g0/2)` and `exp(g0/4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeFactors {
    pub half_g1: Complex64,
    pub ratio: Complex64,
    pub quarter: Complex64,
}

/// `(cosh(Gamma Z), cosh(Gamma Z) - 1, sinh(Gamma Z)/Gamma)` for
/// `Gamma^2 = s`, real for either sign of `s`.
fn even_functions(s: f64, z: f64) -> (f64, f64, f64) {
    if s > 0.0 {
        let g = s.sqrt();
        let x = g * z;
        let half = (0.5 * x).sinh();
        (x.cosh(), 2.0 * half * half, x.sinh() / g)
    } else if s < 0.0 {
        let g = (-s).sqrt();
        let x = g * z;
        let half = (0.5 * x).sin();
        (x.cos(), -2.0 * half * half, x.sin() / g)
    } else {
        (1.0, 0.0, z)
    }
}

fn require_noncritical(params: &LatticeParams, op: &'static str) -> Result<f64> {
    let regime = params.regime();
    if regime.kind == RegimeKind::Critical {
        return Err(Error::Dispatch {
            op,
            expected: "non-critical",
        });
    }
    Ok(params.gamma_squared())
}

fn require_critical(params: &LatticeParams, op: &'static str) -> Result<()> {
    if params.regime().kind != RegimeKind::Critical {
        return Err(Error::Dispatch {
            op,
            expected: "critical",
        });
    }
    Ok(())
}

/// Displacement parameter `eta(Z)` away from the critical point.
pub fn eval_eta(params: &LatticeParams, z: f64) -> Result<Complex64> {
    let s = require_noncritical(params, "eval_eta")?;
    if params.alpha1 == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (_, c_minus_1, sh) = even_functions(s, z);
    let beta = params.alpha1 / (params.lambda + 2.0 * params.alpha2);
    Ok(Complex64::new(beta * c_minus_1, -params.alpha1 * sh))
}

/// `Gamma -> 0` limit of `eta`: the real part vanishes and the imaginary part
/// grows linearly, `eta = -i alpha1 Z`.
pub fn eval_eta_critical(params: &LatticeParams, z: f64) -> Result<Complex64> {
    require_critical(params, "eval_eta_critical")?;
    Ok(Complex64::new(0.0, -params.alpha1 * z))
}

/// Global phase exponent `nu(Z)`; valid in every regime (the critical value
/// is the continuous limit `i lambda Z`).
pub fn eval_nu(params: &LatticeParams, z: f64) -> Result<Complex64> {
    let lambda_z = params.lambda * z;
    if params.alpha1 == 0.0 || params.regime().kind == RegimeKind::Critical {
        return Ok(Complex64::new(0.0, lambda_z));
    }
    let (_, _, sh) = even_functions(params.gamma_squared(), z);
    let beta = params.alpha1 / (params.lambda + 2.0 * params.alpha2);
    Ok(Complex64::new(
        0.0,
        lambda_z + 2.0 * params.alpha1 * beta * (z - sh),
    ))
}

/// `(g1, g0)` away from the critical point.
///
/// `g0 = -2 ln w` with `w = cosh(Gamma Z) - i (lambda/Gamma) sinh(Gamma Z)`.
/// In the hyperbolic regime `Re w > 0` and the principal logarithm is already
/// continuous. In the trigonometric regime `w` winds around the origin and
/// its argument is unwrapped in closed form.
pub fn eval_g1_g0(params: &LatticeParams, z: f64) -> Result<(Complex64, Complex64)> {
    let s = require_noncritical(params, "eval_g1_g0")?;
    let (c, _, sh) = even_functions(s, z);
    let w = Complex64::new(c, -params.lambda * sh);
    if w.norm() == 0.0 {
        return Err(Error::Singular { what: "g1/g0", z });
    }
    let g1 = I * (2.0 * params.alpha2 * sh) / w;
    let arg = if s < 0.0 {
        unwrapped_arg_trig(params.lambda, (-s).sqrt(), z)
    } else {
        w.arg()
    };
    let g0 = Complex64::new(-2.0 * w.norm().ln(), -2.0 * arg);
    Ok((g1, g0))
}

/// Continuous argument of `cos(phi) - i r sin(phi)` with `phi = gamma Z`,
/// `r = lambda/gamma`, starting from 0 at `Z = 0`.
fn unwrapped_arg_trig(lambda: f64, gamma: f64, z: f64) -> f64 {
    let phi = gamma * z;
    let turns = (phi / PI).round();
    let reduced = phi - turns * PI;
    let r = lambda / gamma;
    -(turns * PI + (r * reduced.tan()).atan())
}

/// `(g1, g0)` at the critical point, where `w = 1 - i lambda Z` has positive
/// real part and the principal logarithm is continuous.
pub fn eval_g1_g0_critical(params: &LatticeParams, z: f64) -> Result<(Complex64, Complex64)> {
    require_critical(params, "eval_g1_g0_critical")?;
    let w = Complex64::new(1.0, -params.lambda * z);
    let g1 = I * (2.0 * params.alpha2 * z) / w;
    let g0 = -2.0 * w.ln();
    Ok((g1, g0))
}
