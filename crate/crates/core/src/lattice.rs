//! Lattice geometry, dimensionless parameters and regime classification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative width of the band around `lambda = 2|alpha2|` that is treated as
/// the critical point.
pub const CRITICAL_REL_TOL: f64 = 1e-12;

/// Upper bound on the truncation size; keeps every index used by the
/// propagator inside the shared log-factorial table.
pub const MAX_SITES: usize = 4096;

/// Physical description of the array: propagation constants `mu + alpha0*n`,
/// base coupling `coupling` and the exponential distance law with decay
/// length `kappa` around the reference spacings `d1`, `d2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalLattice {
    pub mu: f64,
    pub alpha0: f64,
    pub coupling: f64,
    pub kappa: f64,
    pub d1: f64,
    pub d2: f64,
}

impl PhysicalLattice {
    pub fn new(mu: f64, alpha0: f64, coupling: f64, kappa: f64, d1: f64, d2: f64) -> Result<Self> {
        let lattice = Self {
            mu,
            alpha0,
            coupling,
            kappa,
            d1,
            d2,
        };
        lattice.validate()?;
        Ok(lattice)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mu", self.mu), ("alpha0", self.alpha0)] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        for (name, v) in [
            ("coupling", self.coupling),
            ("kappa", self.kappa),
            ("d1", self.d1),
            ("d2", self.d2),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Normalized gradient `alpha0 / C` and distance `C * z`.
    pub fn to_dimensionless(&self, z: f64) -> Result<(f64, f64)> {
        if self.coupling == 0.0 || !self.coupling.is_finite() {
            return Err(Error::invalid("coupling", "must be non-zero"));
        }
        if !z.is_finite() {
            return Err(Error::invalid("z", "must be finite"));
        }
        Ok((self.alpha0 / self.coupling, self.coupling * z))
    }

    /// Spacing between site `n` and its first neighbour.
    pub fn first_neighbor_spacing(&self, n: usize) -> f64 {
        self.d1 - 0.5 * self.kappa * (n as f64).ln()
    }

    /// Spacing between site `n` and its second neighbour.
    pub fn second_neighbor_spacing(&self, n: usize) -> f64 {
        let nf = n as f64;
        self.d2 - 0.5 * self.kappa * (nf * (nf - 1.0)).ln()
    }

    /// First- and second-neighbour couplings at site `n` from the exponential
    /// distance law. Couplings that would reach below site 0 are zero.
    pub fn coupling_profile(&self, n: usize) -> (f64, f64) {
        let law = |d: f64, d_ref: f64| self.coupling * (-(d - d_ref) / self.kappa).exp();
        let c1 = if n >= 1 {
            law(self.first_neighbor_spacing(n), self.d1)
        } else {
            0.0
        };
        let c2 = if n >= 2 {
            law(self.second_neighbor_spacing(n), self.d2)
        } else {
            0.0
        };
        (c1, c2)
    }
}

/// Dimensionless model: gradient `lambda`, first/second neighbour strengths
/// `alpha1`/`alpha2`, excited site `n0` and truncation size `n_sites`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub lambda: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub n0: usize,
    pub n_sites: usize,
}

impl LatticeParams {
    pub fn new(lambda: f64, alpha1: f64, alpha2: f64, n0: usize, n_sites: usize) -> Result<Self> {
        let params = Self {
            lambda,
            alpha1,
            alpha2,
            n0,
            n_sites,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::invalid(
                "lambda",
                format!("must be finite and non-negative, got {}", self.lambda),
            ));
        }
        if !self.alpha1.is_finite() {
            return Err(Error::invalid("alpha1", "must be finite"));
        }
        if !self.alpha2.is_finite() {
            return Err(Error::invalid("alpha2", "must be finite"));
        }
        if self.n_sites == 0 || self.n_sites > MAX_SITES {
            return Err(Error::invalid(
                "n_sites",
                format!("must be in 1..={MAX_SITES}, got {}", self.n_sites),
            ));
        }
        if self.n0 >= self.n_sites {
            return Err(Error::invalid(
                "n0",
                format!("must be below n_sites = {}, got {}", self.n_sites, self.n0),
            ));
        }
        // With alpha2 = 0 the first-neighbour problem is solved directly and
        // never needs the displacement beta.
        if self.alpha1 != 0.0 && self.alpha2 != 0.0 && self.beta_denominator_vanishes() {
            return Err(Error::OutOfScope {
                alpha1: self.alpha1,
            });
        }
        Ok(())
    }

    fn beta_denominator_vanishes(&self) -> bool {
        let denom = self.lambda + 2.0 * self.alpha2;
        denom.abs() <= CRITICAL_REL_TOL * self.lambda.abs().max(2.0 * self.alpha2.abs()).max(1.0)
    }

    /// Real displacement `alpha1 / (lambda + 2 alpha2)` that removes the
    /// linear terms of the generator. Zero when `alpha1 = 0`.
    pub fn beta(&self) -> f64 {
        if self.alpha1 == 0.0 {
            0.0
        } else {
            self.alpha1 / (self.lambda + 2.0 * self.alpha2)
        }
    }

    /// `Gamma^2 = 4 alpha2^2 - lambda^2`, factored to limit cancellation.
    pub fn gamma_squared(&self) -> f64 {
        let two_a2 = 2.0 * self.alpha2;
        (two_a2 - self.lambda) * (two_a2 + self.lambda)
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeKind {
    /// `4 alpha2^2 > lambda^2`: Gamma real, unbounded spreading.
    Hyperbolic,
    /// `4 alpha2^2 < lambda^2`: Gamma imaginary, oscillatory revivals.
    Trigonometric,
    /// `4 alpha2^2 = lambda^2` within [`CRITICAL_REL_TOL`].
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub kind: RegimeKind,
    pub gamma: Complex64,
}

pub fn classify_regime(params: &LatticeParams) -> Regime {
    let s = params.gamma_squared();
    let four_a2_sq = 4.0 * params.alpha2 * params.alpha2;
    let lambda_sq = params.lambda * params.lambda;
    let band = CRITICAL_REL_TOL * four_a2_sq.max(lambda_sq).max(1.0);
    if s.abs() <= band {
        Regime {
            kind: RegimeKind::Critical,
            gamma: Complex64::new(0.0, 0.0),
        }
    } else if s > 0.0 {
        Regime {
            kind: RegimeKind::Hyperbolic,
            gamma: Complex64::new(s.sqrt(), 0.0),
        }
    } else {
        Regime {
            kind: RegimeKind::Trigonometric,
            gamma: Complex64::new(0.0, (-s).sqrt()),
        }
    }
}
