//! Truncated Fock-space matrices for the single-photon and su(1,1) generators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::lattice::LatticeParams;

pub type CMatrix = DMatrix<Complex64>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `a`, `a+`, `n`, `K+ = a+^2/2`, `K- = a^2/2`, `K0 = (n + 1/2)/2` and the
/// identity on the first `dim` number states. Entries are filled from their
/// closed forms rather than by multiplying truncated matrices, so products
/// are exact except near the truncation edge.
#[derive(Debug, Clone)]
pub struct FockOperators {
    pub dim: usize,
    pub a: CMatrix,
    pub a_dag: CMatrix,
    pub number: CMatrix,
    pub k_plus: CMatrix,
    pub k_minus: CMatrix,
    pub k_zero: CMatrix,
    pub identity: CMatrix,
}

impl FockOperators {
    pub fn new(dim: usize) -> Self {
        let a = CMatrix::from_fn(dim, dim, |i, j| {
            if j == i + 1 {
                c((j as f64).sqrt())
            } else {
                c(0.0)
            }
        });
        let k_minus = CMatrix::from_fn(dim, dim, |i, j| {
            if j == i + 2 {
                c(0.5 * ((j * (j - 1)) as f64).sqrt())
            } else {
                c(0.0)
            }
        });
        let number = CMatrix::from_fn(dim, dim, |i, j| if i == j { c(i as f64) } else { c(0.0) });
        let k_zero = CMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                c(0.5 * (i as f64 + 0.5))
            } else {
                c(0.0)
            }
        });
        Self {
            dim,
            a_dag: a.adjoint(),
            k_plus: k_minus.adjoint(),
            a,
            k_minus,
            number,
            k_zero,
            identity: CMatrix::identity(dim, dim),
        }
    }

    /// `exp(eta a+ - eta* a)` is `exp(i G)` with this Hermitian `G`.
    pub fn displacement_generator(&self, eta: Complex64) -> CMatrix {
        let i = Complex64::new(0.0, 1.0);
        (&self.a_dag * eta - &self.a * eta.conj()) * (-i)
    }

    /// `K+ + chi K0 + K-`.
    pub fn su11_generator(&self, chi: f64) -> CMatrix {
        &self.k_plus + &self.k_minus + &self.k_zero * c(chi)
    }
}

/// `M` with `i dPsi/dZ = -M Psi`: `lambda n + alpha1 (a + a+) + alpha2 (a^2 + a+^2)`.
pub fn lattice_generator(params: &LatticeParams, dim: usize) -> CMatrix {
    let ops = FockOperators::new(dim);
    &ops.number * c(params.lambda)
        + (&ops.a + &ops.a_dag) * c(params.alpha1)
        + (&ops.k_plus + &ops.k_minus) * c(2.0 * params.alpha2)
}

pub fn commutator(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x * y - y * x
}

/// Largest entry magnitude of `m` restricted to the leading `size` block.
pub fn block_max_abs(m: &CMatrix, size: usize) -> f64 {
    let size = size.min(m.nrows()).min(m.ncols());
    m.view((0, 0), (size, size))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}
