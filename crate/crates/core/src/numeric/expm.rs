//! Dense matrix exponential by scaling and squaring with a degree-13 Padé
//! approximant.
//!
//! Complex matrices are mapped to the real block form `[[X, -Y], [Y, X]]`,
//! which is closed under products and inverses, so the exponential is
//! evaluated entirely with real BLAS-style kernels.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::fock::CMatrix;
use crate::error::{Error, Result};

/// Largest complex dimension accepted by [`matrix_exp_oracle`].
pub const MAX_ORACLE_DIM: usize = 1024;

const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// `exp(i t G)` for a square complex `generator`.
pub fn matrix_exp_oracle(generator: &CMatrix, t: f64) -> Result<CMatrix> {
    let i_t = Complex64::new(0.0, t);
    expm(&(generator * i_t))
}

/// `exp(A)` for a square complex matrix.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n > MAX_ORACLE_DIM {
        return Err(Error::Resource {
            dim: n,
            max: MAX_ORACLE_DIM,
        });
    }
    let real = to_real_block(a);
    Ok(from_real_block(&expm_real(&real), n))
}

fn to_real_block(a: &CMatrix) -> DMatrix<f64> {
    let n = a.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = a[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

fn from_real_block(r: &DMatrix<f64>, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| Complex64::new(r[(i, j)], r[(i + n, j)]))
}

fn one_norm(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Real scaling-and-squaring exponential.
pub fn expm_real(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a * 2f64.powi(-squarings);

    let ident = DMatrix::<f64>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE_13;

    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9])
        + &a6 * b[7]
        + &a4 * b[5]
        + &a2 * b[3]
        + &ident * b[1];
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &ident * b[0];

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Pade denominator is nonsingular for scaled norms below theta_13");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_is_identity() {
        let g = CMatrix::from_fn(6, 6, |i, j| {
            Complex64::new((i + j) as f64, i as f64 - j as f64)
        });
        let e = matrix_exp_oracle(&g, 0.0).unwrap();
        assert!((e - CMatrix::identity(6, 6)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_phases() {
        let n = 12;
        let g = CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(if i == j { i as f64 } else { 0.0 }, 0.0)
        });
        let t = 1.7;
        let e = matrix_exp_oracle(&g, t).unwrap();
        for i in 0..n {
            assert!((e[(i, i)] - Complex64::from_polar(1.0, t * i as f64)).norm() < 1e-13);
        }
    }

    #[test]
    fn rotation_generator() {
        // exp([[0, -x],[x, 0]]) = [[cos x, -sin x],[sin x, cos x]]
        let x = 9.3;
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(-x, 0.0),
                Complex64::new(x, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)].re - x.cos()).abs() < 1e-13);
        assert!((e[(1, 0)].re - x.sin()).abs() < 1e-13);
        assert!(e[(0, 1)].im.abs() < 1e-13);
    }

    #[test]
    fn hermitian_generator_gives_unitary() {
        let n = 40;
        let g = CMatrix::from_fn(n, n, |i, j| {
            let (i, j) = (i as f64, j as f64);
            Complex64::new((i * 0.3 + j * 0.3).cos(), (i - j) * 0.05)
        });
        let u = matrix_exp_oracle(&g, 2.3).unwrap();
        let defect = &u.adjoint() * &u - CMatrix::identity(n, n);
        assert!(defect.norm() < 1e-10);
    }

    #[test]
    fn dimension_cap() {
        let g = CMatrix::zeros(MAX_ORACLE_DIM + 1, MAX_ORACLE_DIM + 1);
        assert!(matches!(
            matrix_exp_oracle(&g, 1.0),
            Err(Error::Resource { .. })
        ));
    }
}
