use super::render::{ply, svg, SvgScene};
use super::report::{write_csv, write_timings, SweepRow, Timings};
use super::scenario::{planar, sphere, ScenarioKind};
use crate::coarsen::{default_samples, majority_phase, Certificates, CoarseningResult, InterfaceCloud};
use crate::error::{Error, Result};
use crate::extend::{reflect_extend, TubularMap};
use crate::flatten::{compose, flat_pieces, greedy_cover, Cover, CoverOptions, FlatPieces, FlatteningMap};
use crate::functionals::{
    energy_analytic, energy_polyhedral_in, energy_pullback, pairwise_perimeters, pairwise_perimeters_analytic,
    SurfaceEnergyDensity,
};
use crate::geometry::Point;
use crate::grid::{build_graded_seed_set, build_seed_set, c_star, delta0, voronoi, GradedOptions, SeedSet};
use crate::partition::sampling::derive_seed;
use crate::partition::{restricted_difference_tv, symmetric_difference_volume, AnalyticPartition, Domain};
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridMode {
    /// Spacing adapted to the local piece distances.
    #[default]
    Graded,
    /// The single spacing `min(δ₀, min dist / 2c*) / 2`.
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineOptions {
    /// Defaults to `max(500, 50/ε²)`.
    pub samples_per_cell: Option<usize>,
    pub grid: GridMode,
    /// Chart radius cap as a fraction of the smallest side of Ω's bounding box.
    pub max_radius_fraction: f64,
    /// Box margin around Ω as a fraction of its largest side.
    pub margin_fraction: f64,
    pub symdiff_samples: usize,
    /// Grid resolution per ball for the sampled map bounds.
    pub bounds_grid: usize,
    /// Largest seed count accepted for the uniform grid.
    pub uniform_seed_limit: usize,
    /// Anisotropy `c` of the energy density `1 + c|ν·e₁|`.
    pub anisotropy: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            samples_per_cell: None,
            grid: GridMode::Graded,
            max_radius_fraction: 0.25,
            margin_fraction: 0.25,
            symdiff_samples: 200_000,
            bounds_grid: 12,
            uniform_seed_limit: 4_000_000,
            anisotropy: 0.5,
        }
    }
}

/// Every intermediate artifact of one pipeline run.
pub struct Approximation<const D: usize> {
    /// The input, extended across ∂Ω when Ω is bounded.
    pub extended: AnalyticPartition<D>,
    pub cover: Cover<D>,
    pub map: FlatteningMap<D>,
    pub pieces: FlatPieces<D>,
    pub seeds: SeedSet<D>,
    pub coarse: CoarseningResult<D>,
    pub bounds: (Point<D>, Point<D>),
    pub row: SweepRow,
    pub timings: Timings,
}

struct Clock {
    t: Instant,
    stages: Vec<(String, f64)>,
}

impl Clock {
    fn new() -> Self {
        Self { t: Instant::now(), stages: Vec::new() }
    }
    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.stages.push((name.to_string(), (now - self.t).as_secs_f64()));
        self.t = now;
    }
}

fn patch_bbox<const D: usize>(u: &AnalyticPartition<D>) -> (Point<D>, Point<D>) {
    let (mut lo, mut hi) = u.bounds();
    let k = 64;
    for p in u.patches() {
        for i in 0..=k {
            for j in 0..=if D == 2 { 0 } else { k } {
                let x = p.geometry.point([i as f64 / k as f64, j as f64 / k as f64]);
                lo = lo.inf(&x);
                hi = hi.sup(&x);
            }
        }
    }
    (lo, hi)
}

/// Ω's box grown by the margin, enclosing every patch of `extended`.
pub fn working_box<const D: usize>(
    u: &AnalyticPartition<D>,
    extended: &AnalyticPartition<D>,
    opts: &PipelineOptions,
) -> (Point<D>, Point<D>) {
    let (olo, ohi) = u.bounds();
    let (plo, phi) = patch_bbox(extended);
    let margin = opts.margin_fraction * (ohi - olo).max();
    (plo.inf(&olo).add_scalar(-margin), phi.sup(&ohi).add_scalar(margin))
}

/// Cover options used by the pipeline inside `bounds`.
pub fn cover_options<const D: usize>(u: &AnalyticPartition<D>, bounds: (Point<D>, Point<D>), opts: &PipelineOptions) -> CoverOptions<D> {
    let (olo, ohi) = u.bounds();
    CoverOptions { max_radius: opts.max_radius_fraction * (ohi - olo).min(), bounds: Some(bounds), ..Default::default() }
}

/// `u` extended across ∂Ω when it has a domain, otherwise a copy.
pub fn extend_planar(u: &AnalyticPartition<2>) -> Result<AnalyticPartition<2>> {
    match u.domain() {
        Some(dom) => Ok(reflect_extend(u, Arc::new(TubularMap::new(dom)?))?.partition),
        None => Ok(u.clone()),
    }
}

/// Planar entry point: extends `u` across ∂Ω first when it has a domain.
pub fn approximate_planar(u: &AnalyticPartition<2>, eps: f64, seed: u64, opts: &PipelineOptions) -> Result<Approximation<2>> {
    let mut clock = Clock::new();
    let extended = extend_planar(u)?;
    clock.lap("extend");
    run(u, extended, u.domain().cloned(), eps, seed, opts, clock)
}

/// Spatial entry point (no domain extension).
pub fn approximate_spatial(u: &AnalyticPartition<3>, eps: f64, seed: u64, opts: &PipelineOptions) -> Result<Approximation<3>> {
    run(u, u.clone(), None, eps, seed, opts, Clock::new())
}

fn run<const D: usize>(
    u: &AnalyticPartition<D>,
    extended: AnalyticPartition<D>,
    domain: Option<Domain>,
    eps: f64,
    seed: u64,
    opts: &PipelineOptions,
    mut clock: Clock,
) -> Result<Approximation<D>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Invalid(format!("eps {eps} outside (0, 1)")));
    }
    let n = D;
    let (olo, ohi) = u.bounds();
    let bounds = working_box(u, &extended, opts);
    let cover = greedy_cover(&extended, eps, &cover_options(u, bounds, opts))?;
    clock.lap("cover");
    let map = compose(cover.charts.clone(), eps)?;
    let mb = map.sampled_bounds(opts.bounds_grid);
    clock.lap("compose");
    let pieces = flat_pieces(&cover.charts, eps, extended.labels())?;
    clock.lap("pieces");

    let d0 = delta0(&pieces.set, &bounds)?;
    let delta_literal = 0.5 * d0.min(pieces.set.min_distance() / (2.0 * c_star(n)));
    let seeds = match opts.grid {
        GridMode::Graded => build_graded_seed_set(&pieces.set, bounds, GradedOptions::for_box(&bounds))?,
        GridMode::Uniform => {
            let vol: f64 = (bounds.1 - bounds.0).iter().product();
            let est = vol / delta_literal.powi(n as i32);
            if !(est <= opts.uniform_seed_limit as f64) {
                return Err(Error::SpacingTooLarge(format!("uniform grid at delta {delta_literal:e} needs about {est:.3e} seeds")));
            }
            build_seed_set(&pieces.set, delta_literal, bounds)?
        }
    };
    clock.lap("seeds");
    let tess = voronoi(seeds.points.clone(), bounds)?;
    clock.lap("voronoi");

    let sigma = if D == 2 { seeds.delta.max(1e-5) } else { seeds.delta.max((cover.total_mass / 1e6).sqrt()) };
    let cloud = InterfaceCloud::new(&extended, sigma);
    let ext_cls = extended.classifier();
    let map_ref = &map;
    let v = move |x: &Point<D>| ext_cls.phase(&map_ref.forward(x));
    let cert = Certificates { u: &extended, map: &map, cloud: &cloud };
    let samples = opts.samples_per_cell.unwrap_or_else(|| default_samples(eps));
    let mut coarse = majority_phase(&v, tess, extended.labels(), samples, derive_seed(seed, 1), eps, Some(&cert));
    clock.lap("coarsen");
    let residual = coarse.attach_residual(&pieces.mustar)?;
    let residual_covered = restricted_difference_tv(&pieces.mustar, &coarse.dw)?;
    clock.lap("residual");

    let w = &coarse.partition;
    let dom = domain.as_ref();
    let unit = SurfaceEnergyDensity::unit();
    let aniso = SurfaceEnergyDensity::anisotropic(opts.anisotropy);
    let perimeter_exact = energy_analytic(u, &unit)?;
    let perimeter_w = energy_polyhedral_in(w, &unit, dom);
    let region = |x: &Point<D>| match dom {
        Some(d) => d.contains(&Point::<2>::new(x[0], x[1])),
        None => true,
    };
    let cls = u.classifier();
    let symdiff = (0..u.labels().len())
        .map(|z| symmetric_difference_volume(cls.as_ref(), w, z, (olo, ohi), &region, opts.symdiff_samples, derive_seed(seed, 2)))
        .collect();
    let upper = |m: Vec<Vec<f64>>| {
        let k = m.len();
        (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).map(|(a, b)| m[a][b]).collect::<Vec<f64>>()
    };
    let pair_exact = upper(pairwise_perimeters_analytic(u));
    let pair_w = upper(pairwise_perimeters(w, dom));
    let energy_a = energy_analytic(u, &aniso)?;
    let (energy_pb, status) = match energy_pullback(u, &map, &aniso) {
        Ok(e) => (e, "ok".to_string()),
        Err(e) => (f64::NAN, format!("ok; pullback: {e}")),
    };
    let energy_w = energy_polyhedral_in(w, &aniso, dom);
    clock.lap("diagnostics");

    let row = SweepRow {
        scenario: String::new(),
        dim: D,
        eps,
        seed,
        status,
        grid: match opts.grid {
            GridMode::Graded => "graded".into(),
            GridMode::Uniform => "uniform".into(),
        },
        delta_literal,
        delta_min: seeds.delta,
        delta0: d0,
        charts: cover.charts.len(),
        pieces: pieces.set.len(),
        seeds: seeds.len(),
        total_mass: cover.total_mass,
        uncovered_mass: cover.uncovered_mass,
        residual,
        residual_covered,
        map_sup_sum: mb.sup_sum,
        map_sup_jacobian: mb.sup_jacobian,
        map_sup_displacement: mb.sup_displacement,
        perimeter_exact,
        perimeter_w,
        perimeter_rel_error: (perimeter_w - perimeter_exact).abs() / perimeter_exact,
        symdiff,
        pair_exact,
        pair_w,
        energy_analytic: energy_a,
        energy_pullback: energy_pb,
        energy_polyhedral: energy_w,
        cells_far: coarse.stats.far,
        cells_flat: coarse.stats.flat,
        cells_sampled: coarse.stats.sampled,
    };
    let timings = Timings { scenario: String::new(), eps, stages: clock.stages };
    Ok(Approximation { extended, cover, map, pieces, seeds, coarse, bounds, row, timings })
}

impl SweepRow {
    /// Row for a run that stopped with `err`; numeric diagnostics are NaN.
    pub fn failed(scenario: &str, dim: usize, eps: f64, seed: u64, err: &Error) -> Self {
        let nan = f64::NAN;
        Self {
            scenario: scenario.to_string(),
            dim,
            eps,
            seed,
            status: format!("error: {err}"),
            delta_literal: nan,
            delta_min: nan,
            delta0: nan,
            total_mass: nan,
            uncovered_mass: match err {
                Error::BudgetInfeasible { achieved, .. } => *achieved,
                _ => nan,
            },
            residual: nan,
            residual_covered: nan,
            map_sup_sum: nan,
            map_sup_jacobian: nan,
            map_sup_displacement: nan,
            perimeter_exact: nan,
            perimeter_w: nan,
            perimeter_rel_error: nan,
            energy_analytic: nan,
            energy_pullback: nan,
            energy_polyhedral: nan,
            ..Default::default()
        }
    }
}

/// Output of [`run_sweep`].
#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub timings: Vec<Timings>,
}

/// Writes `name` under `dir` as pretty JSON.
fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

/// Largest output partition written to disk in full.
pub const PARTITION_DUMP_LIMIT: usize = 200_000;

fn write_artifacts<const D: usize>(dir: &Path, a: &Approximation<D>) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_json(dir, "input.json", &a.extended.summary())?;
    write_json(dir, "cover.json", &a.cover.dump())?;
    write_json(dir, "charts.json", &a.map.records())?;
    write_json(dir, "pieces.json", &a.pieces.set)?;
    write_json(dir, "row.json", &a.row)?;
    if a.coarse.partition.cells().len() <= PARTITION_DUMP_LIMIT {
        write_json(dir, "partition.json", &a.coarse.partition)?;
    }
    Ok(())
}

/// One approximation per `eps`. Stage errors become rows with an error
/// status. With `out_dir`, writes `sweep.csv`, `timings.csv` and per-ε
/// artifacts (JSON, plus an SVG overlay in 2D or a PLY file in 3D).
pub fn run_sweep(
    kind: ScenarioKind,
    eps_list: &[f64],
    seed: u64,
    opts: &PipelineOptions,
    out_dir: Option<&Path>,
) -> Result<SweepReport> {
    let mut report = SweepReport::default();
    for &eps in eps_list {
        let sub = out_dir.map(|d| d.join(format!("{}-eps-{eps}", kind.name())));
        let outcome = if kind.dimension() == 2 {
            approximate_planar(&planar(kind)?, eps, seed, opts).and_then(|a| {
                if let Some(dir) = &sub {
                    write_artifacts(dir, &a)?;
                    let scene = SvgScene {
                        input: &a.extended,
                        pieces: Some(&a.pieces.set),
                        output: Some(&a.coarse.partition),
                        skeleton_limit: 20_000,
                        window: Some(a.bounds),
                    };
                    std::fs::write(dir.join("overlay.svg"), svg(&scene))?;
                }
                Ok((a.row, a.timings))
            })
        } else {
            approximate_spatial(&sphere(), eps, seed, opts).and_then(|a| {
                if let Some(dir) = &sub {
                    write_artifacts(dir, &a)?;
                    std::fs::write(dir.join("jump.ply"), ply(&a.coarse.partition))?;
                }
                Ok((a.row, a.timings))
            })
        };
        match outcome {
            Ok((mut row, mut t)) => {
                row.scenario = kind.name().to_string();
                t.scenario = kind.name().to_string();
                report.rows.push(row);
                report.timings.push(t);
            }
            Err(e) => report.rows.push(SweepRow::failed(kind.name(), kind.dimension(), eps, seed, &e)),
        }
    }
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        write_csv(std::fs::File::create(dir.join("sweep.csv"))?, &report.rows)?;
        write_timings(std::fs::File::create(dir.join("timings.csv"))?, &report.timings)?;
    }
    Ok(report)
}
