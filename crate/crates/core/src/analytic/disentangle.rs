//! Normal-ordering of `exp(i r Z (K+ + chi K0 + K-))` into
//! `exp(i f K+) exp(i g K0) exp(i h K-)`, written directly in terms of the
//! algebra parameters `chi` and rate `r`. This is an independent route to the
//! `g1`, `g0` of [`super::frame`]: with `r = 2 alpha2` and
//! `chi = lambda/alpha2` one has `g1 = i f` and `exp(g0) = exp(i g)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance on `|chi| - 2` below which the parabolic branch is used.
pub const PARABOLIC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisentangleFns {
    pub f: Complex64,
    /// Principal-branch value; only `exp(i g)` is branch independent.
    pub g: Complex64,
    pub h: Complex64,
}

pub fn disentangle(chi: f64, rate: f64, z: f64) -> Result<DisentangleFns> {
    if !(chi.is_finite() && rate.is_finite() && z.is_finite()) {
        return Err(Error::invalid("chi", "chi, rate and Z must be finite"));
    }
    let (f, g) = if (chi.abs() - 2.0).abs() <= PARABOLIC_TOL * chi.abs().max(1.0) {
        parabolic(chi.signum(), rate * z)
    } else {
        generic(chi, rate, z)?
    };
    Ok(DisentangleFns { f, g, h: f })
}

/// `chi = +-2`: `f = rZ/(1 -+ i rZ)`, `g = +-pi + 2i ln(+-i + rZ)`.
fn parabolic(sign: f64, rz: f64) -> (Complex64, Complex64) {
    let rz_c = Complex64::new(rz, 0.0);
    let f = rz_c / (1.0 - sign * I * rz_c);
    let g = Complex64::new(sign * std::f64::consts::PI, 0.0) + 2.0 * I * (sign * I + rz_c).ln();
    (f, g)
}

fn generic(chi: f64, rate: f64, z: f64) -> Result<(Complex64, Complex64)> {
    let q = Complex64::new(chi * chi - 4.0, 0.0).sqrt();
    let theta = 0.5 * rate * z * q;
    let (sin, cos) = (theta.sin(), theta.cos());
    // 2i / (chi + i q cot(theta)), multiplied through by sin(theta).
    let denom = chi * sin + I * q * cos;
    if denom.norm() == 0.0 {
        return Err(Error::Singular {
            what: "disentangle f",
            z,
        });
    }
    let f = 2.0 * I * sin / denom;
    let inner = cos - I * (chi / q) * sin;
    if inner.norm() == 0.0 {
        return Err(Error::Singular {
            what: "disentangle g",
            z,
        });
    }
    // g = -i ln(inner^-2) = 2i ln(inner)
    let g = 2.0 * I * inner.ln();
    Ok((f, g))
}
