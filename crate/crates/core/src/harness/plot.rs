//! gnuplot scripts for written intensity maps. Scripts refer to the CSV by
//! its file name, so they run from the output directory.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::map::IntensityMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "style")]
pub enum PlotStyle {
    /// Intensity over (site, Z).
    Heatmap,
    /// Intensity against site at the grid point nearest `z`.
    ZSlice { z: f64 },
    /// Intensity against Z at one site.
    SiteSlice { site: usize },
}

pub fn emit_plot_script(map: &IntensityMap, csv_name: &str, style: PlotStyle) -> Result<String> {
    let p = &map.metadata.params;
    let title = format!(
        "lambda={} alpha1={} alpha2={} n0={}",
        p.lambda, p.alpha1, p.alpha2, p.n0
    );
    let mut s = String::new();
    writeln!(
        s,
        "# gnuplot script; run from the directory holding {csv_name}"
    )
    .unwrap();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set title '{title}'").unwrap();
    match style {
        PlotStyle::Heatmap => {
            let dz = match map.z_grid.as_slice() {
                [a, b, ..] => b - a,
                _ => 0.0,
            };
            writeln!(s, "dz = {dz}").unwrap();
            writeln!(s, "set xlabel 'n'\nset ylabel 'Z'\nset cblabel '|Psi|^2'").unwrap();
            writeln!(s, "set palette rgb 33,13,10").unwrap();
            writeln!(s, "set xrange [-0.5:{}]", map.sites.len() as f64 - 0.5).unwrap();
            writeln!(
                s,
                "plot '{csv_name}' matrix rowheaders columnheaders using 1:($2*dz):3 with image notitle"
            )
            .unwrap();
        }
        PlotStyle::ZSlice { z } => {
            let row = map
                .z_grid
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - z).abs().total_cmp(&(b.1 - z).abs()))
                .map(|(i, _)| i)
                .ok_or_else(|| Error::invalid("z", "map has no grid points"))?;
            writeln!(s, "set xlabel 'n'\nset ylabel '|Psi|^2'").unwrap();
            writeln!(
                s,
                "plot '{csv_name}' matrix rowheaders columnheaders every :::{row}::{row} using 1:3 with impulses lw 2 title 'Z = {}'",
                map.z_grid[row]
            )
            .unwrap();
        }
        PlotStyle::SiteSlice { site } => {
            let col = map
                .sites
                .iter()
                .position(|&m| m == site)
                .ok_or(Error::Range {
                    index: site,
                    max: map.sites.len().saturating_sub(1),
                })?;
            writeln!(s, "set xlabel 'Z'\nset ylabel '|Psi|^2'").unwrap();
            writeln!(
                s,
                "plot '{csv_name}' skip 1 using 1:{} with lines lw 2 title 'n = {site}'",
                col + 2
            )
            .unwrap();
        }
    }
    writeln!(s, "pause mouse close").unwrap();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::harness::analytic_map;
    use crate::lattice::LatticeParams;

    fn map() -> IntensityMap {
        let p = LatticeParams::new(2.0, 0.1, 0.5, 10, 30).unwrap();
        analytic_map(&p, &[0.0, 0.5, 1.0], Exec::Sequential).unwrap()
    }

    #[test]
    fn scripts_reference_the_csv() {
        let m = map();
        for style in [
            PlotStyle::Heatmap,
            PlotStyle::ZSlice { z: 0.6 },
            PlotStyle::SiteSlice { site: 10 },
        ] {
            let s = emit_plot_script(&m, "intensity.csv", style).unwrap();
            assert!(s.contains("plot 'intensity.csv'"), "{s}");
        }
        let z = emit_plot_script(&m, "intensity.csv", PlotStyle::ZSlice { z: 0.6 }).unwrap();
        assert!(z.contains("every :::1::1"));
        let n = emit_plot_script(&m, "intensity.csv", PlotStyle::SiteSlice { site: 10 }).unwrap();
        assert!(n.contains("using 1:12"));
    }

    #[test]
    fn unknown_site_is_an_error() {
        assert!(emit_plot_script(&map(), "i.csv", PlotStyle::SiteSlice { site: 99 }).is_err());
    }
}
