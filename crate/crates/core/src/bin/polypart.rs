use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use polypart::harness::{
    approximate_planar, approximate_spatial, doubling_baseline, planar, ply, run_sweep, sphere, svg, write_csv,
    GridMode, PipelineOptions, RunConfig, ScenarioKind, SvgScene,
};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "polypart", version, about = "Polyhedral approximation of multi-phase partitions")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Run the pipeline once and write its artifacts.
    Approximate(Common),
    /// Run the pipeline for a list of ε and write `sweep.csv`.
    Sweep(Common),
    /// Compare the scalar mollify-and-threshold baseline with the pipeline.
    DoublingDemo {
        #[command(flatten)]
        common: Common,
        /// Raster step of the baseline.
        #[arg(long, default_value_t = 1.0 / 512.0)]
        grid_step: f64,
        /// Gaussian standard deviation in raster steps.
        #[arg(long, default_value_t = 4.0)]
        mollify_steps: f64,
        /// Only run the baseline.
        #[arg(long)]
        baseline_only: bool,
    },
    /// Write an SVG overlay (2D) or PLY jump set (3D) for one ε.
    Render {
        #[command(flatten)]
        common: Common,
        /// Draw the Voronoi skeleton up to this many cells.
        #[arg(long, default_value_t = 20_000)]
        skeleton_limit: usize,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// TOML run description; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<ScenarioKind>,
    /// One or more values, comma separated.
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_parser = ["2", "3"])]
    dimension: Option<String>,
    #[arg(long)]
    samples_per_cell: Option<usize>,
    /// `graded` or `uniform`.
    #[arg(long)]
    grid: Option<String>,
}

impl Common {
    fn resolve(&self, default_scenario: ScenarioKind) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p).with_context(|| format!("reading {}", p.display()))?,
            None => RunConfig {
                scenario: default_scenario,
                eps: vec![0.1],
                seed: 42,
                out_dir: None,
                pipeline: PipelineOptions::default(),
            },
        };
        if let Some(d) = &self.dimension {
            if self.scenario.is_none() && self.config.is_none() {
                cfg.scenario = if d == "3" { ScenarioKind::Sphere } else { default_scenario };
            }
        }
        if let Some(s) = self.scenario {
            cfg.scenario = s;
        }
        if let Some(d) = &self.dimension {
            if cfg.scenario.dimension().to_string() != *d {
                bail!("scenario {} is {}-dimensional, not {d}", cfg.scenario, cfg.scenario.dimension());
            }
        }
        if !self.eps.is_empty() {
            cfg.eps = self.eps.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = &self.out_dir {
            cfg.out_dir = Some(o.clone());
        }
        if self.samples_per_cell.is_some() {
            cfg.pipeline.samples_per_cell = self.samples_per_cell;
        }
        match self.grid.as_deref() {
            None => {}
            Some("graded") => cfg.pipeline.grid = GridMode::Graded,
            Some("uniform") => cfg.pipeline.grid = GridMode::Uniform,
            Some(g) => bail!("unknown grid mode {g}"),
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_csv(rows: &[polypart::harness::SweepRow]) -> Result<()> {
    write_csv(std::io::stdout().lock(), rows)?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.verb {
        Verb::Approximate(c) => {
            let cfg = c.resolve(ScenarioKind::Circle)?;
            let eps = *cfg.eps.first().context("no eps given")?;
            let report = run_sweep(cfg.scenario, &[eps], cfg.seed, &cfg.pipeline, cfg.out_dir.as_deref())?;
            print_csv(&report.rows)?;
        }
        Verb::Sweep(c) => {
            let cfg = c.resolve(ScenarioKind::Circle)?;
            let report = run_sweep(cfg.scenario, &cfg.eps, cfg.seed, &cfg.pipeline, cfg.out_dir.as_deref())?;
            print_csv(&report.rows)?;
            for t in &report.timings {
                let total: f64 = t.stages.iter().map(|s| s.1).sum();
                eprintln!("{} eps={} {total:.2}s", t.scenario, t.eps);
            }
        }
        Verb::DoublingDemo { common, grid_step, mollify_steps, baseline_only } => {
            let cfg = common.resolve(ScenarioKind::TripleJunction)?;
            if cfg.scenario.dimension() != 2 {
                bail!("the baseline is planar");
            }
            let u = planar(cfg.scenario)?;
            let exact = cfg.scenario.exact_perimeter();
            let b = doubling_baseline(&u, mollify_steps, grid_step);
            println!("exact total interface length: {exact:.6}");
            for (c, l) in b.thresholds.iter().zip(&b.lengths) {
                println!("baseline level {c}: {l:.6}");
            }
            println!("baseline total: {:.6} (relative error {:+.2}%)", b.total, 100.0 * (b.total - exact) / exact);
            if !baseline_only {
                for &eps in &cfg.eps {
                    let a = approximate_planar(&u, eps, cfg.seed, &cfg.pipeline)?;
                    println!(
                        "pipeline eps={eps}: {:.6} (relative error {:+.2}%)",
                        a.row.perimeter_w,
                        100.0 * (a.row.perimeter_w - exact) / exact
                    );
                }
            }
        }
        Verb::Render { common, skeleton_limit } => {
            let cfg = common.resolve(ScenarioKind::Circle)?;
            let eps = *cfg.eps.first().context("no eps given")?;
            let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir)?;
            let name = format!("{}-eps-{eps}", cfg.scenario.name());
            if cfg.scenario.dimension() == 2 {
                let a = approximate_planar(&planar(cfg.scenario)?, eps, cfg.seed, &cfg.pipeline)?;
                let scene = SvgScene {
                    input: &a.extended,
                    pieces: Some(&a.pieces.set),
                    output: Some(&a.coarse.partition),
                    skeleton_limit,
                    window: Some(a.bounds),
                };
                let path = dir.join(format!("{name}.svg"));
                std::fs::write(&path, svg(&scene))?;
                println!("{}", path.display());
            } else {
                let a = approximate_spatial(&sphere(), eps, cfg.seed, &cfg.pipeline)?;
                let path = dir.join(format!("{name}.ply"));
                std::fs::write(&path, ply(&a.coarse.partition))?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}
