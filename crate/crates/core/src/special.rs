//! Scalar kernels used by the closed-form propagator: log-factorials,
//! associated Laguerre polynomials and the integer selection functions that
//! replace the `cos^2(k*pi/2)` and step factors of the matrix-element sums.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest index of the shared table returned by [`log_factorials`].
pub const SHARED_TABLE_MAX: usize = 16_384;

/// Precomputed `ln(n!)` for `n` in `0..=n_max`.
#[derive(Debug, Clone)]
pub struct LogFactorialTable {
    values: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(n_max: usize) -> Self {
        // Neumaier summation keeps each entry within half an ulp of the
        // exactly rounded value, so consecutive differences reproduce ln(n).
        let mut values = Vec::with_capacity(n_max + 1);
        let mut sum = 0.0_f64;
        let mut comp = 0.0_f64;
        values.push(0.0);
        for n in 1..=n_max {
            let term = (n as f64).ln();
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
            values.push(sum + comp);
        }
        Self { values }
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `ln(n!)`. Panics when `n` is outside the table; use [`Self::get`] for
    /// a checked lookup.
    #[inline]
    pub fn ln_fact(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn get(&self, n: usize) -> Result<f64> {
        self.values.get(n).copied().ok_or(Error::Range {
            index: n,
            max: self.n_max(),
        })
    }

    /// `sqrt(a!/b!)` for table-range arguments.
    ///
    /// Evaluated as a compensated (double-double) running product with binary
    /// exponent rescaling, which keeps the result within a few ulps even where
    /// `a!` itself overflows.
    pub fn sqrt_ratio(&self, a: usize, b: usize) -> Result<f64> {
        let max = self.n_max();
        for idx in [a, b] {
            if idx > max {
                return Err(Error::Range { index: idx, max });
            }
        }
        if a == b {
            return Ok(1.0);
        }
        let (hi_idx, lo_idx) = if a > b { (a, b) } else { (b, a) };
        let root = sqrt_factorial_quotient(lo_idx, hi_idx);
        Ok(if a > b { root } else { 1.0 / root })
    }
}

/// sqrt(hi!/lo!) for lo < hi.
fn sqrt_factorial_quotient(lo: usize, hi: usize) -> f64 {
    const RESCALE_EXP: i32 = 600;
    let threshold = 2.0_f64.powi(RESCALE_EXP);
    let shrink = 2.0_f64.powi(-RESCALE_EXP);

    let (mut p_hi, mut p_lo) = (1.0_f64, 0.0_f64);
    let mut exp2: i32 = 0;
    for i in (lo + 1)..=hi {
        let x = i as f64;
        let prod = p_hi * x;
        let err = p_hi.mul_add(x, -prod);
        let lo_part = p_lo * x + err;
        let s = prod + lo_part;
        p_lo = lo_part - (s - prod);
        p_hi = s;
        if p_hi > threshold {
            p_hi *= shrink;
            p_lo *= shrink;
            exp2 += RESCALE_EXP;
        }
    }
    // exp2 is a multiple of 600 and therefore even.
    let s = p_hi.sqrt();
    let resid = (-s).mul_add(s, p_hi) + p_lo;
    let root = s + resid / (2.0 * s);
    root * 2.0_f64.powi(exp2 / 2)
}

static SHARED: OnceLock<LogFactorialTable> = OnceLock::new();

/// Process-wide table covering `0..=SHARED_TABLE_MAX`.
pub fn log_factorials() -> &'static LogFactorialTable {
    SHARED.get_or_init(|| LogFactorialTable::new(SHARED_TABLE_MAX))
}

/// `sqrt(a!/b!)` using the shared table range.
pub fn sqrt_ratio_factorials(a: usize, b: usize) -> Result<f64> {
    log_factorials().sqrt_ratio(a, b)
}

/// Associated Laguerre polynomial `L_n^{(k)}(x)` by upward three-term
/// recurrence in the degree.
pub fn assoc_laguerre(n: usize, k: i64, x: f64) -> f64 {
    let k = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for j in 2..=n {
        let jf = j as f64;
        let next = ((2.0 * jf - 1.0 + k - x) * cur - (jf - 1.0 + k) * prev) / jf;
        prev = cur;
        cur = next;
    }
    cur
}

/// Unit step that is 1 at the origin.
#[inline]
pub fn step(x: i64) -> u8 {
    u8::from(x >= 0)
}

/// 1 when `m` and `k` have the same parity, else 0.
#[inline]
pub fn same_parity(m: i64, k: i64) -> u8 {
    u8::from((m - k).rem_euclid(2) == 0)
}
