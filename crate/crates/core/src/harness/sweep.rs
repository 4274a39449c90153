use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::map::{analytic_map, write_atomic};
use super::period::{bloch_period, formula_period, ScanRow};
use crate::error::Result;
use crate::exec::Exec;
use crate::lattice::LatticeParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub base: LatticeParams,
    pub rows: Vec<ScanRow>,
    pub dirs: Vec<PathBuf>,
}

fn job_dir(out: &Path, alpha1: f64) -> PathBuf {
    out.join(format!("alpha1_{alpha1}"))
}

/// Runs one analytic map per `alpha1` value as independent jobs under
/// `exec`. Each job writes `intensity.csv` and `meta.json` into its own
/// `alpha1_<value>` subdirectory; `summary.json` lists the measured periods.
pub fn run_sweep(
    base: &LatticeParams,
    alpha1_values: &[f64],
    z_grid: &[f64],
    out: &Path,
    exec: Exec,
) -> Result<SweepSummary> {
    base.validate()?;
    std::fs::create_dir_all(out)?;
    let rows = exec.try_map(alpha1_values.len(), |i| {
        let params = LatticeParams {
            alpha1: alpha1_values[i],
            ..*base
        };
        let map = analytic_map(&params, z_grid, Exec::Sequential)?;
        map.write_to(&job_dir(out, params.alpha1))?;
        let period = bloch_period(&map, params.n0)?;
        let z_p = formula_period(&params).unwrap_or(f64::NAN);
        Ok::<_, crate::Error>(ScanRow {
            alpha1: params.alpha1,
            measured: period.measured,
            z_p,
            ratio: period.measured.map(|m| m / z_p).filter(|r| r.is_finite()),
        })
    })?;
    let summary = SweepSummary {
        base: *base,
        dirs: alpha1_values.iter().map(|&a| job_dir(out, a)).collect(),
        rows,
    };
    write_atomic(
        &out.join("summary.json"),
        &serde_json::to_vec_pretty(&summary)?,
    )?;
    Ok(summary)
}
