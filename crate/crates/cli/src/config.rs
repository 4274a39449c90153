//! Flat TOML configuration merged with command-line overrides.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use zigzag::harness::uniform_grid;
use zigzag::numeric::IntegratorConfig;
use zigzag::LatticeParams;

/// A problem with the configuration file or the merged settings. Always
/// reported with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config `{path}`: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("config mode `{found}` does not match subcommand `{expected}`")]
    ModeMismatch { found: String, expected: String },
    #[error("missing `mode`: the `run` subcommand takes the mode from the config file")]
    MissingMode,
    #[error("invalid parameter `{name}`: {reason}")]
    Invalid { name: &'static str, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Analytic,
    Numeric,
    Compare,
    Sweep,
    Dsn,
    Period,
}

impl RunMode {
    pub fn name(self) -> &'static str {
        match self {
            RunMode::Analytic => "analytic",
            RunMode::Numeric => "numeric",
            RunMode::Compare => "compare",
            RunMode::Sweep => "sweep",
            RunMode::Dsn => "dsn",
            RunMode::Period => "period",
        }
    }
}

/// Keys accepted in the config file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Option<RunMode>,
    pub lambda: Option<f64>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub n0: Option<usize>,
    pub n_sites: Option<usize>,
    pub z_max: Option<f64>,
    pub z_steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub alpha1_values: Option<Vec<f64>>,
    pub plot: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.to_owned(),
            message: e.message().to_string(),
        })
    }
}

/// Flags shared by every subcommand; each overrides the config key of the
/// same name.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file with any of the flag names as keys (underscores for dashes)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Propagation-constant gradient
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// First-neighbour coupling
    #[arg(long, allow_negative_numbers = true)]
    pub alpha1: Option<f64>,
    /// Second-neighbour coupling
    #[arg(long, allow_negative_numbers = true)]
    pub alpha2: Option<f64>,
    /// Excited site
    #[arg(long)]
    pub n0: Option<usize>,
    /// Number of waveguides
    #[arg(long)]
    pub n_sites: Option<usize>,
    /// Largest propagation distance
    #[arg(long)]
    pub z_max: Option<f64>,
    /// Number of grid intervals on [0, z_max]
    #[arg(long)]
    pub z_steps: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Integrator relative tolerance
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Integrator absolute tolerance
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Also write plot.gp: `heatmap`, `z=<distance>` or `site=<index>`
    #[arg(long)]
    pub plot: Option<String>,
    /// Evaluate grid points on one thread
    #[arg(long)]
    pub sequential: bool,
}

/// Defaults that differ between subcommands.
#[derive(Debug, Clone, Copy)]
pub struct Defaults {
    pub n_sites: usize,
    pub z_max: f64,
    pub z_steps: usize,
}

pub const MAP_DEFAULTS: Defaults = Defaults {
    n_sites: 200,
    z_max: 3.0,
    z_steps: 600,
};

/// Sweeps default to 100 waveguides over Z in [0, 8].
pub const SWEEP_DEFAULTS: Defaults = Defaults {
    n_sites: 100,
    z_max: 8.0,
    z_steps: 1600,
};

pub const DEFAULT_TOL: f64 = 1e-5;
pub const DEFAULT_ALPHA1_VALUES: [f64; 5] = [0.1, 1.0, 2.0, 4.0, 8.0];

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct Settings {
    pub params: LatticeParams,
    pub grid: Vec<f64>,
    pub out: PathBuf,
    pub integrator: IntegratorConfig,
    pub plot: Option<String>,
    pub sequential: bool,
    pub file: FileConfig,
}

impl Settings {
    pub fn resolve(mode: RunMode, args: &CommonArgs, explicit_mode: bool) -> anyhow::Result<Self> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        if let Some(found) = file.mode {
            if explicit_mode && found != mode {
                return Err(ConfigError::ModeMismatch {
                    found: found.name().into(),
                    expected: mode.name().into(),
                }
                .into());
            }
        }
        let defaults = if mode == RunMode::Sweep {
            SWEEP_DEFAULTS
        } else {
            MAP_DEFAULTS
        };
        let pick =
            |flag: Option<f64>, key: Option<f64>, default: f64| flag.or(key).unwrap_or(default);
        let params = LatticeParams::new(
            pick(args.lambda, file.lambda, 2.0),
            pick(args.alpha1, file.alpha1, 0.1),
            pick(args.alpha2, file.alpha2, 0.5),
            args.n0.or(file.n0).unwrap_or(10),
            args.n_sites.or(file.n_sites).unwrap_or(defaults.n_sites),
        )?;
        let z_max = pick(args.z_max, file.z_max, defaults.z_max);
        let z_steps = args.z_steps.or(file.z_steps).unwrap_or(defaults.z_steps);
        let grid = uniform_grid(z_max, z_steps)?;
        let base = IntegratorConfig::default();
        let integrator = IntegratorConfig {
            rel_tol: pick(args.rel_tol, file.rel_tol, base.rel_tol),
            abs_tol: pick(args.abs_tol, file.abs_tol, base.abs_tol),
            ..base
        };
        integrator.validate()?;
        Ok(Self {
            params,
            grid,
            out: args
                .out
                .clone()
                .or_else(|| file.out.clone())
                .unwrap_or_else(|| "out".into()),
            integrator,
            plot: args.plot.clone().or_else(|| file.plot.clone()),
            sequential: args.sequential,
            file,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_and_sweep_defaults_apply() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "lambda = 3.0\nalpha1 = 0.7\nz_steps = 10\n").unwrap();
        let args = CommonArgs {
            config: Some(path),
            alpha1: Some(0.2),
            ..CommonArgs::default()
        };
        let s = Settings::resolve(RunMode::Sweep, &args, true).unwrap();
        assert_eq!(s.params.lambda, 3.0);
        assert_eq!(s.params.alpha1, 0.2);
        assert_eq!(s.params.n_sites, SWEEP_DEFAULTS.n_sites);
        assert_eq!(s.grid.len(), 11);
        assert_eq!(*s.grid.last().unwrap(), SWEEP_DEFAULTS.z_max);
    }

    #[test]
    fn default_map_settings() {
        let s = Settings::resolve(RunMode::Analytic, &CommonArgs::default(), true).unwrap();
        assert_eq!(
            s.params,
            LatticeParams::new(2.0, 0.1, 0.5, 10, 200).unwrap()
        );
        assert_eq!(s.grid.len(), 601);
        assert_eq!(s.integrator, IntegratorConfig::default());
    }

    #[test]
    fn bad_tolerance_is_rejected() {
        let args = CommonArgs {
            rel_tol: Some(-1.0),
            ..CommonArgs::default()
        };
        assert!(Settings::resolve(RunMode::Numeric, &args, true).is_err());
    }
}
