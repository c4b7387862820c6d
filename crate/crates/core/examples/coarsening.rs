//! Full pipeline on the circle: majority-phase coarsening of the Voronoi
//! cells and the residual against the flat pieces.
use polypart::harness::{approximate_planar, circle, PipelineOptions};

fn main() -> anyhow::Result<()> {
    let u = circle();
    for eps in [0.4, 0.2] {
        let a = approximate_planar(&u, eps, 42, &PipelineOptions::default())?;
        let r = &a.row;
        println!(
            "eps {eps}: {} cells ({} far, {} flat, {} sampled), perimeter {:.5} vs {:.5}, residual {:.4}, symdiff {:?}",
            a.coarse.partition.cells().len(),
            r.cells_far,
            r.cells_flat,
            r.cells_sampled,
            r.perimeter_w,
            r.perimeter_exact,
            r.residual,
            r.symdiff
        );
        for (stage, secs) in &a.timings.stages {
            print!("{stage} {secs:.2}s  ");
        }
        println!();
    }
    Ok(())
}
