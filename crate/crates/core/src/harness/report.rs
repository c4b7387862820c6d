use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// One sweep row. Lists (per phase, per pair) are `;`-separated in a single field.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scenario: String,
    pub dim: usize,
    pub eps: f64,
    pub seed: u64,
    pub status: String,
    pub grid: String,
    /// `min(δ₀, min dist / 2c*) / 2`.
    pub delta_literal: f64,
    /// Smallest seed spacing actually used.
    pub delta_min: f64,
    pub delta0: f64,
    pub charts: usize,
    pub pieces: usize,
    pub seeds: usize,
    pub total_mass: f64,
    pub uncovered_mass: f64,
    /// `|Dw − μ*|(Rⁿ)`.
    pub residual: f64,
    /// `|Dw − μ*|` restricted to the support of μ*.
    pub residual_covered: f64,
    pub map_sup_sum: f64,
    pub map_sup_jacobian: f64,
    pub map_sup_displacement: f64,
    pub perimeter_exact: f64,
    pub perimeter_w: f64,
    pub perimeter_rel_error: f64,
    pub symdiff: Vec<f64>,
    pub pair_exact: Vec<f64>,
    pub pair_w: Vec<f64>,
    pub energy_analytic: f64,
    pub energy_pullback: f64,
    pub energy_polyhedral: f64,
    pub cells_far: usize,
    pub cells_flat: usize,
    pub cells_sampled: usize,
}

pub const HEADER: [&str; 33] = [
    "scenario",
    "dim",
    "eps",
    "seed",
    "status",
    "grid",
    "delta_literal",
    "delta_min",
    "delta0",
    "charts",
    "pieces",
    "seeds",
    "total_mass",
    "uncovered_mass",
    "residual",
    "residual_covered",
    "map_sup_sum",
    "map_sup_jacobian",
    "map_sup_displacement",
    "perimeter_exact",
    "perimeter_w",
    "perimeter_rel_error",
    "symdiff",
    "symdiff_max",
    "pair_exact",
    "pair_w",
    "energy_analytic",
    "energy_pullback",
    "energy_polyhedral",
    "cells_far",
    "cells_flat",
    "cells_sampled",
    "pair_rel_error_max",
];

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(";")
}

impl SweepRow {
    pub fn symdiff_max(&self) -> f64 {
        self.symdiff.iter().copied().fold(f64::NAN, f64::max)
    }

    pub fn pair_rel_error_max(&self) -> f64 {
        self.pair_exact
            .iter()
            .zip(&self.pair_w)
            .filter(|(e, _)| **e > 0.0)
            .map(|(e, w)| (w - e).abs() / e)
            .fold(f64::NAN, f64::max)
    }

    pub fn fields(&self) -> Vec<String> {
        let f = fmt_f64;
        vec![
            self.scenario.clone(),
            self.dim.to_string(),
            f(self.eps),
            self.seed.to_string(),
            self.status.clone(),
            self.grid.clone(),
            f(self.delta_literal),
            f(self.delta_min),
            f(self.delta0),
            self.charts.to_string(),
            self.pieces.to_string(),
            self.seeds.to_string(),
            f(self.total_mass),
            f(self.uncovered_mass),
            f(self.residual),
            f(self.residual_covered),
            f(self.map_sup_sum),
            f(self.map_sup_jacobian),
            f(self.map_sup_displacement),
            f(self.perimeter_exact),
            f(self.perimeter_w),
            f(self.perimeter_rel_error),
            fmt_list(&self.symdiff),
            f(self.symdiff_max()),
            fmt_list(&self.pair_exact),
            fmt_list(&self.pair_w),
            f(self.energy_analytic),
            f(self.energy_pullback),
            f(self.energy_polyhedral),
            self.cells_far.to_string(),
            self.cells_flat.to_string(),
            self.cells_sampled.to_string(),
            f(self.pair_rel_error_max()),
        ]
    }
}

/// Header plus one record per row.
pub fn write_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Wall-clock seconds per pipeline stage.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub scenario: String,
    pub eps: f64,
    pub stages: Vec<(String, f64)>,
}

pub fn write_timings<W: Write>(out: W, rows: &[Timings]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scenario", "eps", "stage", "seconds"])?;
    for t in rows {
        for (stage, s) in &t.stages {
            w.write_record([t.scenario.clone(), fmt_f64(t.eps), stage.clone(), format!("{s:.6}")])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_for_no_rows() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("scenario,dim,eps"));
    }

    #[test]
    fn row_width_matches_header() {
        let r = SweepRow { symdiff: vec![0.1, 0.2], pair_exact: vec![1.0], pair_w: vec![1.05], ..Default::default() };
        assert_eq!(r.fields().len(), HEADER.len());
        assert!((r.pair_rel_error_max() - 0.05).abs() < 1e-12);
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
    }
}
