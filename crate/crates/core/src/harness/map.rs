use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytic::{amplitude, dsn_distribution};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::LatticeParams;
use crate::numeric::{integrate, IntegratorConfig, OdeSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Numeric,
    Dsn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapMetadata {
    pub params: LatticeParams,
    pub mode: Mode,
    /// Present for numeric maps.
    pub integrator: Option<IntegratorConfig>,
    pub version: String,
}

impl MapMetadata {
    pub fn new(params: LatticeParams, mode: Mode, integrator: Option<IntegratorConfig>) -> Self {
        Self {
            params,
            mode,
            integrator,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// `intensity[i][m] = |Psi_{n0,m}(z_grid[i])|^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityMap {
    pub z_grid: Vec<f64>,
    pub sites: Vec<usize>,
    pub intensity: Vec<Vec<f64>>,
    pub metadata: MapMetadata,
}

impl IntensityMap {
    /// Largest `|sum_m I(Z_i, m) - 1|` over the grid.
    pub fn max_norm_deviation(&self) -> f64 {
        self.intensity
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `I(Z_i, site)` for every grid point.
    pub fn site_trace(&self, site: usize) -> Result<Vec<f64>> {
        let col = self
            .sites
            .iter()
            .position(|&s| s == site)
            .ok_or(Error::Range {
                index: site,
                max: self.sites.len().saturating_sub(1),
            })?;
        Ok(self.intensity.iter().map(|row| row[col]).collect())
    }

    /// CSV text: header `Z,0,1,...`, then one row per grid point. Values are
    /// written in shortest round-trip form so parsing restores them exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("Z");
        for s in &self.sites {
            write!(out, ",{s}").unwrap();
        }
        out.push('\n');
        for (z, row) in self.z_grid.iter().zip(&self.intensity) {
            write!(out, "{z}").unwrap();
            for v in row {
                write!(out, ",{v:e}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`IntensityMap::to_csv`]; metadata is supplied separately.
    pub fn from_csv(text: &str, metadata: MapMetadata) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            reason: "empty input".into(),
        })?;
        let mut cols = header.split(',');
        if cols.next().map(str::trim) != Some("Z") {
            return Err(Error::Parse {
                line: 1,
                reason: "header must start with Z".into(),
            });
        }
        let sites = cols
            .map(|c| {
                c.trim().parse::<usize>().map_err(|e| Error::Parse {
                    line: 1,
                    reason: format!("site index {c:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut z_grid = Vec::new();
        let mut intensity = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let values = line
                .split(',')
                .map(|c| {
                    c.trim().parse::<f64>().map_err(|e| Error::Parse {
                        line: lineno,
                        reason: format!("{c:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if values.len() != sites.len() + 1 {
                return Err(Error::Parse {
                    line: lineno,
                    reason: format!(
                        "expected {} fields, found {}",
                        sites.len() + 1,
                        values.len()
                    ),
                });
            }
            z_grid.push(values[0]);
            intensity.push(values[1..].to_vec());
        }
        Ok(Self {
            z_grid,
            sites,
            intensity,
            metadata,
        })
    }

    /// Writes `intensity.csv` and `meta.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        self.write_named(dir, "intensity.csv", "meta.json")
    }

    pub fn write_named(&self, dir: &Path, csv: &str, meta: &str) -> Result<()> {
        fs::create_dir_all(dir)?;
        write_atomic(&dir.join(csv), self.to_csv().as_bytes())?;
        let json = serde_json::to_vec_pretty(&self.metadata)?;
        write_atomic(&dir.join(meta), &json)
    }

    pub fn read_from(dir: &Path) -> Result<Self> {
        let metadata: MapMetadata = serde_json::from_slice(&fs::read(dir.join("meta.json"))?)?;
        Self::from_csv(&fs::read_to_string(dir.join("intensity.csv"))?, metadata)
    }
}

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::invalid("path", "must name a file"))?
        .to_string_lossy();
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// `z_steps + 1` equally spaced points on `[0, z_max]`, or just `[0]` when
/// `z_max = 0`.
pub fn uniform_grid(z_max: f64, z_steps: usize) -> Result<Vec<f64>> {
    if !(z_max.is_finite() && z_max >= 0.0) {
        return Err(Error::invalid(
            "z_max",
            format!("must be finite and non-negative, got {z_max}"),
        ));
    }
    if z_max == 0.0 {
        return Ok(vec![0.0]);
    }
    if z_steps == 0 {
        return Err(Error::invalid("z_steps", "must be at least 1"));
    }
    Ok((0..=z_steps)
        .map(|i| z_max * i as f64 / z_steps as f64)
        .collect())
}

fn sites(params: &LatticeParams) -> Vec<usize> {
    (0..params.n_sites).collect()
}

/// Closed-form map; grid points are evaluated independently under `exec`.
pub fn analytic_map(params: &LatticeParams, z_grid: &[f64], exec: Exec) -> Result<IntensityMap> {
    params.validate()?;
    let intensity = exec.try_map(z_grid.len(), |i| {
        amplitude(params, z_grid[i]).map(|row| row.intensities())
    })?;
    Ok(IntensityMap {
        z_grid: z_grid.to_vec(),
        sites: sites(params),
        intensity,
        metadata: MapMetadata::new(*params, Mode::Analytic, None),
    })
}

/// Integrated map on `params.n_sites` sites. Returns the per-point norm
/// drift alongside.
pub fn numeric_map(
    params: &LatticeParams,
    z_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<(IntensityMap, Vec<f64>)> {
    params.validate()?;
    let states = integrate(&OdeSystem::new(*params), cfg, z_grid)?;
    let drift = states.iter().map(|s| s.norm_drift).collect();
    let intensity = states
        .iter()
        .map(|s| s.amps.iter().map(|a| a.norm_sqr()).collect())
        .collect();
    let map = IntensityMap {
        z_grid: z_grid.to_vec(),
        sites: sites(params),
        intensity,
        metadata: MapMetadata::new(*params, Mode::Numeric, Some(*cfg)),
    };
    Ok((map, drift))
}

/// Map from the explicit zero-gradient squeezed-state distribution.
pub fn dsn_map(params: &LatticeParams, z_grid: &[f64], exec: Exec) -> Result<IntensityMap> {
    params.validate()?;
    let intensity = exec.try_map(z_grid.len(), |i| dsn_distribution(params, z_grid[i]))?;
    Ok(IntensityMap {
        z_grid: z_grid.to_vec(),
        sites: sites(params),
        intensity,
        metadata: MapMetadata::new(*params, Mode::Dsn, None),
    })
}
