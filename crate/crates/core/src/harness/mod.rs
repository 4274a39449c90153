//! Intensity maps, engine comparison, Bloch-period measurement, parameter
//! sweeps and plot scripts. Everything the command-line tool writes goes
//! through here.

mod compare;
mod map;
mod period;
mod plot;
mod sweep;

pub use compare::{compare_maps, ComparisonReport, PeriodEstimate};
pub use map::{
    analytic_map, dsn_map, numeric_map, uniform_grid, write_atomic, IntensityMap, MapMetadata, Mode,
};
pub use period::{
    bloch_period, find_revivals, formula_period, period_doubling_scan, PeriodResult, ScanRow,
    MIN_PROMINENCE, REVIVAL_FRACTION,
};
pub use plot::{emit_plot_script, PlotStyle};
pub use sweep::{run_sweep, SweepSummary};
