//! Scenario library, end-to-end pipeline, sweeps, reports and the
//! scalar level-set baseline.

mod config;
mod doubling;
mod pipeline;
mod render;
mod report;
mod scenario;

pub use config::RunConfig;
pub use doubling::{doubling_baseline, DoublingResult, ScalarGrid};
pub use pipeline::{
    approximate_planar, approximate_spatial, cover_options, extend_planar, run_sweep, working_box, Approximation, GridMode, PipelineOptions, SweepReport,
    PARTITION_DUMP_LIMIT,
};
pub use render::{ply, svg, SvgScene};
pub use report::{fmt_f64, write_csv, write_timings, SweepRow, Timings, HEADER};
pub use scenario::{annuli, circle, planar, sphere, stripe, triple_junction, triple_junction_arms, ScenarioKind, ALL_2D};
