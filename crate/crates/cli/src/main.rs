mod config;

use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use zigzag::harness::{
    analytic_map, bloch_period, compare_maps, dsn_map, emit_plot_script, numeric_map, run_sweep,
    write_atomic, IntensityMap, PeriodEstimate, PeriodResult, PlotStyle,
};
use zigzag::Exec;

use config::{CommonArgs, ConfigError, RunMode, Settings, DEFAULT_ALPHA1_VALUES, DEFAULT_TOL};

const EXIT_PARAMETER: u8 = 2;
const EXIT_TOLERANCE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "zigzag-sim",
    version,
    about = "Light propagation in semi-infinite zigzag waveguide arrays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Intensity map from the closed-form solution
    Analytic(CommonArgs),
    /// Intensity map from direct integration
    Numeric(CommonArgs),
    /// Both maps plus report.json; exits 3 when they differ by more than --tol
    Compare(CompareArgs),
    /// One analytic map per alpha1 value and a period summary
    Sweep(SweepArgs),
    /// Explicit squeezed-state distribution (requires --lambda 0)
    Dsn(CommonArgs),
    /// Measured and predicted revival period of the excited site
    Period(CommonArgs),
    /// Mode taken from the `mode` key of --config
    Run(RunArgs),
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest acceptable max_abs_err between the two maps
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated first-neighbour couplings
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha1_values: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha1_values: Option<Vec<f64>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let parameter = err.chain().any(|cause| {
        cause.downcast_ref::<ConfigError>().is_some()
            || cause
                .downcast_ref::<zigzag::Error>()
                .is_some_and(zigzag::Error::is_parameter_error)
    });
    if parameter {
        EXIT_PARAMETER
    } else {
        1
    }
}

fn dispatch(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Analytic(args) => run(RunMode::Analytic, &args, true, None, None),
        Command::Numeric(args) => run(RunMode::Numeric, &args, true, None, None),
        Command::Dsn(args) => run(RunMode::Dsn, &args, true, None, None),
        Command::Period(args) => run(RunMode::Period, &args, true, None, None),
        Command::Compare(a) => run(RunMode::Compare, &a.common, true, a.tol, None),
        Command::Sweep(a) => run(RunMode::Sweep, &a.common, true, None, a.alpha1_values),
        Command::Run(a) => {
            let mode = match &a.common.config {
                Some(path) => config::FileConfig::load(path)?.mode,
                None => None,
            }
            .ok_or(ConfigError::MissingMode)?;
            run(mode, &a.common, false, a.tol, a.alpha1_values)
        }
    }
}

fn run(
    mode: RunMode,
    args: &CommonArgs,
    explicit_mode: bool,
    tol: Option<f64>,
    alpha1_values: Option<Vec<f64>>,
) -> anyhow::Result<ExitCode> {
    let s = Settings::resolve(mode, args, explicit_mode)?;
    let exec = if s.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    std::fs::create_dir_all(&s.out).with_context(|| format!("creating {}", s.out.display()))?;
    match mode {
        RunMode::Analytic | RunMode::Dsn => {
            let map = if mode == RunMode::Dsn {
                dsn_map(&s.params, &s.grid, exec)?
            } else {
                analytic_map(&s.params, &s.grid, exec)?
            };
            write_map(&map, &s.out, s.plot.as_deref())?;
            println!(
                "{}: {} points x {} sites -> {}",
                mode.name(),
                map.z_grid.len(),
                map.sites.len(),
                s.out.display()
            );
        }
        RunMode::Numeric => {
            let (map, drift) = numeric_map(&s.params, &s.grid, &s.integrator)?;
            write_map(&map, &s.out, s.plot.as_deref())?;
            let worst = drift.iter().copied().fold(0.0, f64::max);
            println!(
                "numeric: {} points, max norm drift {worst:.3e} -> {}",
                map.z_grid.len(),
                s.out.display()
            );
        }
        RunMode::Compare => {
            let tol = tol.or(s.file.tol).unwrap_or(DEFAULT_TOL);
            if !(tol.is_finite() && tol > 0.0) {
                return Err(ConfigError::Invalid {
                    name: "tol",
                    reason: format!("must be positive, got {tol}"),
                }
                .into());
            }
            let analytic = analytic_map(&s.params, &s.grid, exec)?;
            let (numeric, drift) = numeric_map(&s.params, &s.grid, &s.integrator)?;
            write_map(&analytic, &s.out.join("analytic"), s.plot.as_deref())?;
            write_map(&numeric, &s.out.join("numeric"), s.plot.as_deref())?;
            let mut report = compare_maps(&analytic, &numeric)?;
            report.norm_drift = report
                .norm_drift
                .max(drift.iter().copied().fold(0.0, f64::max));
            report.integrator = Some(s.integrator);
            let n0 = s.params.n0;
            let (a, n) = (bloch_period(&analytic, n0)?, bloch_period(&numeric, n0)?);
            report.period_estimates = vec![
                PeriodEstimate {
                    method: "analytic".into(),
                    z_p: a.measured,
                },
                PeriodEstimate {
                    method: "numeric".into(),
                    z_p: n.measured,
                },
                PeriodEstimate {
                    method: "formula".into(),
                    z_p: a.formula,
                },
            ];
            write_json(&s.out.join("report.json"), &report)?;
            let pass = report.passes(tol);
            println!(
                "compare: max_abs_err {:.3e} (tol {tol:e}) {}",
                report.max_abs_err,
                if pass { "ok" } else { "FAILED" }
            );
            if !pass {
                return Ok(ExitCode::from(EXIT_TOLERANCE));
            }
        }
        RunMode::Sweep => {
            let values = alpha1_values
                .or_else(|| s.file.alpha1_values.clone())
                .unwrap_or_else(|| DEFAULT_ALPHA1_VALUES.to_vec());
            if values.is_empty() {
                return Err(ConfigError::Invalid {
                    name: "alpha1_values",
                    reason: "must list at least one value".into(),
                }
                .into());
            }
            let summary = run_sweep(&s.params, &values, &s.grid, &s.out, exec)?;
            for row in &summary.rows {
                let show = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.5}"));
                println!(
                    "alpha1 {:>8}: period {}, ratio {}",
                    row.alpha1,
                    show(row.measured),
                    show(row.ratio)
                );
            }
        }
        RunMode::Period => {
            let map = analytic_map(&s.params, &s.grid, exec)?;
            let result = bloch_period(&map, s.params.n0)?;
            write_json(&s.out.join("period.json"), &result)?;
            print_period(&result);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_period(r: &PeriodResult) {
    let show = |v: Option<f64>| v.map_or("none".to_string(), |x| format!("{x:.6}"));
    println!(
        "period: measured {}, formula {}",
        show(r.measured),
        show(r.formula)
    );
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    write_atomic(path, &serde_json::to_vec_pretty(value)?)?;
    Ok(())
}

fn parse_plot(spec: &str) -> Result<PlotStyle, ConfigError> {
    let invalid = || ConfigError::Invalid {
        name: "plot",
        reason: format!("expected `heatmap`, `z=<distance>` or `site=<index>`, got `{spec}`"),
    };
    if spec == "heatmap" {
        return Ok(PlotStyle::Heatmap);
    }
    match spec.split_once('=') {
        Some(("z", v)) => v
            .parse()
            .map(|z| PlotStyle::ZSlice { z })
            .map_err(|_| invalid()),
        Some(("site", v)) => v
            .parse()
            .map(|site| PlotStyle::SiteSlice { site })
            .map_err(|_| invalid()),
        _ => Err(invalid()),
    }
}

fn write_map(map: &IntensityMap, dir: &Path, plot: Option<&str>) -> anyhow::Result<()> {
    let style = plot.map(parse_plot).transpose()?;
    map.write_to(dir)?;
    if let Some(style) = style {
        let script = emit_plot_script(map, "intensity.csv", style)?;
        write_atomic(&dir.join("plot.gp"), script.as_bytes())?;
    }
    Ok(())
}
