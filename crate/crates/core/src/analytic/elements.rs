//! Fock-basis matrix elements of the displacement and squeeze propagators.

use num_complex::Complex64;

use crate::special::{assoc_laguerre, log_factorials, same_parity, step};

/// `<m| D(eta) |n>` with `D(eta) = exp(eta a+ - eta* a)`.
///
/// Indices must lie inside the shared log-factorial table.
pub fn displacement_element(m: usize, n: usize, eta: Complex64) -> Complex64 {
    let x = eta.norm_sqr();
    if x == 0.0 {
        return if m == n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let lf = log_factorials();
    // For m < n the element is the m >= n form with (m, n) swapped and
    // eta -> -eta*.
    let (hi, lo, base) = if m >= n {
        (m, n, eta)
    } else {
        (n, m, -eta.conj())
    };
    let power = (hi - lo) as f64;
    let log_mag = -0.5 * x + 0.5 * (lf.ln_fact(lo) - lf.ln_fact(hi)) + power * base.norm().ln();
    let lag = assoc_laguerre(lo, (hi - lo) as i64, x);
    Complex64::from_polar(log_mag.exp(), power * base.arg()) * lag
}

/// `<m| exp(g1 K+) exp(g0 K0) exp(g1 K-) |k>`.
///
/// `g0` must already sit on the branch continuous in `Z`; `exp(g0/4)` is
/// taken from it directly. Every factorial-bearing factor is assembled in
/// log space.
pub fn squeeze_element(m: usize, k: usize, g1: Complex64, g0: Complex64) -> Complex64 {
    let (mi, ki) = (m as i64, k as i64);
    if same_parity(mi, ki) == 0 {
        return Complex64::new(0.0, 0.0);
    }
    if g1.norm() == 0.0 {
        // Only the j = m = k term survives.
        return if m == k {
            (g0 * (0.25 + 0.5 * m as f64)).exp()
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let lf = log_factorials();
    let log_half_g1 = (g1 * 0.5).ln();
    let root = 0.5 * (lf.ln_fact(m) + lf.ln_fact(k));
    let mut acc = Complex64::new(0.0, 0.0);
    for j in (0..=m.min(k)).rev() {
        let ji = j as i64;
        if step(mi - ji) * step(ki - ji) * same_parity(mi, ji) * same_parity(ki, ji) == 0 {
            continue;
        }
        let (a, b) = ((m - j) / 2, (k - j) / 2);
        // Grouped so that swapping m and k gives bit-identical terms.
        let real = root - (lf.ln_fact(a) + lf.ln_fact(b)) - lf.ln_fact(j);
        // (g1/2)^{(m+k)/2 - j} has an integer exponent, so the principal
        // logarithm is safe here.
        let expo =
            Complex64::new(real, 0.0) + log_half_g1 * (a + b) as f64 + g0 * (0.25 + 0.5 * j as f64);
        acc += expo.exp();
    }
    acc
}
