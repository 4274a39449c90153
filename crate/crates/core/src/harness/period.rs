use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::map::{analytic_map, IntensityMap};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{LatticeParams, RegimeKind};

/// Peaks of the return intensity with smaller prominence are ripple.
pub const MIN_PROMINENCE: f64 = 0.05;
/// A peak counts as a revival only if it reaches this fraction of the
/// initial return intensity.
pub const REVIVAL_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodResult {
    /// Mean spacing of successive revivals, counting `Z = z_grid[0]` as the
    /// first. `None` when no revival is found.
    pub measured: Option<f64>,
    /// `2 pi / lambda` for `alpha2 = 0`, `pi / sqrt(lambda^2 - 4 alpha2^2)`
    /// in the oscillatory regime, otherwise `None`.
    pub formula: Option<f64>,
}

pub fn formula_period(params: &LatticeParams) -> Option<f64> {
    if params.alpha2 == 0.0 {
        (params.lambda > 0.0).then(|| 2.0 * PI / params.lambda)
    } else if params.regime().kind == RegimeKind::Trigonometric {
        Some(PI / (-params.gamma_squared()).sqrt())
    } else {
        None
    }
}

/// Interpolated positions of the revivals in a sampled trace, the first
/// sample included.
pub fn find_revivals(z: &[f64], r: &[f64]) -> Vec<f64> {
    assert_eq!(z.len(), r.len());
    let Some(&r0) = r.first() else {
        return Vec::new();
    };
    let mut out = vec![z[0]];
    for i in 1..r.len().saturating_sub(1) {
        if !(r[i] > r[i - 1] && r[i] >= r[i + 1]) {
            continue;
        }
        if r[i] < REVIVAL_FRACTION * r0 || prominence(r, i) < MIN_PROMINENCE {
            continue;
        }
        out.push(vertex(z[i - 1], z[i], z[i + 1], r[i - 1], r[i], r[i + 1]));
    }
    out
}

/// Height of peak `i` above the higher of the two lowest points reached
/// before climbing to something taller (or leaving the trace).
fn prominence(r: &[f64], i: usize) -> f64 {
    let peak = r[i];
    let mut left = peak;
    for &v in r[..i].iter().rev() {
        if v > peak {
            break;
        }
        left = left.min(v);
    }
    let mut right = peak;
    for &v in &r[i + 1..] {
        if v > peak {
            break;
        }
        right = right.min(v);
    }
    peak - left.max(right)
}

/// Abscissa of the parabola through three points.
fn vertex(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> f64 {
    let d0 = (y1 - y0) / (x1 - x0);
    let d1 = (y2 - y1) / (x2 - x1);
    let curvature = (d1 - d0) / (x2 - x0);
    if curvature >= 0.0 {
        return x1;
    }
    let x = 0.5 * (x0 + x1) - d0 / (2.0 * curvature);
    x.clamp(x0, x2)
}

/// Revival period of `|Psi_{n0,n0}(Z)|^2` in `map`, alongside the formula
/// value for the map's parameters.
pub fn bloch_period(map: &IntensityMap, n0: usize) -> Result<PeriodResult> {
    let trace = map.site_trace(n0)?;
    let revivals = find_revivals(&map.z_grid, &trace);
    let measured = (revivals.len() >= 2)
        .then(|| (revivals[revivals.len() - 1] - revivals[0]) / (revivals.len() - 1) as f64);
    Ok(PeriodResult {
        measured,
        formula: formula_period(&map.metadata.params),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub alpha1: f64,
    pub measured: Option<f64>,
    pub z_p: f64,
    /// `measured / z_p`.
    pub ratio: Option<f64>,
}

/// Measured revival period for each `alpha1`, relative to the
/// `alpha1`-independent `Z_p` of `base`.
pub fn period_doubling_scan(
    base: &LatticeParams,
    alpha1_values: &[f64],
    z_grid: &[f64],
    exec: Exec,
) -> Result<Vec<ScanRow>> {
    if base.alpha2 == 0.0 || base.regime().kind != RegimeKind::Trigonometric {
        return Err(Error::invalid(
            "lambda",
            "period scan needs lambda > 2 |alpha2| with alpha2 non-zero",
        ));
    }
    let z_p = formula_period(base).expect("oscillatory regime has a period");
    exec.try_map(alpha1_values.len(), |i| {
        let params = LatticeParams {
            alpha1: alpha1_values[i],
            ..*base
        };
        let map = analytic_map(&params, z_grid, Exec::Sequential)?;
        let measured = bloch_period(&map, params.n0)?.measured;
        Ok(ScanRow {
            alpha1: params.alpha1,
            measured,
            z_p,
            ratio: measured.map(|m| m / z_p),
        })
    })
}
