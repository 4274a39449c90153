use serde::{Deserialize, Serialize};

use super::map::IntensityMap;
use crate::error::{Error, Result};
use crate::numeric::IntegratorConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodEstimate {
    pub method: String,
    pub z_p: Option<f64>,
}

/// Differences between two intensity maps on the same grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub max_abs_err: f64,
    /// Root-sum-square of all entry differences.
    pub l2_err: f64,
    /// Mean of `candidate - reference`; the only field whose sign depends on
    /// the order of the arguments.
    pub mean_signed_err: f64,
    /// Largest `|sum_m I - 1|` seen in either map.
    pub norm_drift: f64,
    pub per_z_max_err: Vec<(f64, f64)>,
    pub period_estimates: Vec<PeriodEstimate>,
    pub integrator: Option<IntegratorConfig>,
}

impl ComparisonReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_abs_err <= tol
    }
}

pub fn compare_maps(
    reference: &IntensityMap,
    candidate: &IntensityMap,
) -> Result<ComparisonReport> {
    if reference.z_grid != candidate.z_grid {
        return Err(Error::invalid(
            "z_grid",
            "maps were sampled on different grids",
        ));
    }
    if reference.sites != candidate.sites {
        return Err(Error::invalid("n_sites", "maps cover different sites"));
    }
    let mut max_abs: f64 = 0.0;
    let mut sum_sq = 0.0;
    let mut sum_signed = 0.0;
    let mut count = 0usize;
    let mut per_z = Vec::with_capacity(reference.z_grid.len());
    for ((z, r), c) in reference
        .z_grid
        .iter()
        .zip(&reference.intensity)
        .zip(&candidate.intensity)
    {
        let mut row_max: f64 = 0.0;
        for (a, b) in r.iter().zip(c) {
            let d = b - a;
            row_max = row_max.max(d.abs());
            sum_sq += d * d;
            sum_signed += d;
            count += 1;
        }
        max_abs = max_abs.max(row_max);
        per_z.push((*z, row_max));
    }
    Ok(ComparisonReport {
        max_abs_err: max_abs,
        l2_err: sum_sq.sqrt(),
        mean_signed_err: if count == 0 {
            0.0
        } else {
            sum_signed / count as f64
        },
        norm_drift: reference
            .max_norm_deviation()
            .max(candidate.max_norm_deviation()),
        per_z_max_err: per_z,
        period_estimates: Vec::new(),
        integrator: reference
            .metadata
            .integrator
            .or(candidate.metadata.integrator),
    })
}
