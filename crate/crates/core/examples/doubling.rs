//! Scalar mollify-and-threshold baseline against the pipeline on the
//! triple junction.
use polypart::harness::{approximate_planar, doubling_baseline, triple_junction, PipelineOptions, ScenarioKind};

fn main() -> anyhow::Result<()> {
    let u = triple_junction();
    let exact = ScenarioKind::TripleJunction.exact_perimeter();
    let b = doubling_baseline(&u, 4.0, 1.0 / 512.0);
    for (c, l) in b.thresholds.iter().zip(&b.lengths) {
        println!("level {c}: {l:.4}");
    }
    println!("baseline {:.4} ({:+.1}%)", b.total, 100.0 * (b.total - exact) / exact);
    let a = approximate_planar(&u, 0.2, 42, &PipelineOptions::default())?;
    println!("pipeline at eps 0.2: {:.4} ({:+.2}%)", a.row.perimeter_w, 100.0 * (a.row.perimeter_w - exact) / exact);
    Ok(())
}
