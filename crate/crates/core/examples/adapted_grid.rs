//! Graded seed set around the flat pieces of the triple junction and the
//! quality of its Voronoi tessellation.
use polypart::flatten::{flat_pieces, greedy_cover, CoverOptions};
use polypart::grid::{build_graded_seed_set, check_tessellation, delta0, face_cap, voronoi, GradedOptions};
use polypart::harness::{extend_planar, triple_junction, working_box, PipelineOptions};

fn main() -> anyhow::Result<()> {
    let u = triple_junction();
    let ext = extend_planar(&u)?;
    let opts = PipelineOptions::default();
    let bounds = working_box(&u, &ext, &opts);
    let eps = 0.2;
    let cover = greedy_cover(&ext, eps, &CoverOptions { max_radius: 0.5, bounds: Some(bounds), ..Default::default() })?;
    let pieces = flat_pieces(&cover.charts, eps, ext.labels())?;
    println!("{} pieces, min distance {:.4e}, delta0 {:.4e}", pieces.set.len(), pieces.set.min_distance(), delta0(&pieces.set, &bounds)?);
    let seeds = build_graded_seed_set(&pieces.set, bounds, GradedOptions::for_box(&bounds))?;
    let tess = voronoi(seeds.points.clone(), bounds)?;
    let rep = check_tessellation(&seeds, &tess, &pieces.set, 50);
    println!("{} seeds, finest spacing {:.3e}", seeds.len(), seeds.delta);
    println!(
        "inradius/bound >= {:.3}, circumradius/bound <= {:.3}, faces <= {} (cap {}), skeleton distance {:.1e}",
        rep.min_inradius_ratio,
        rep.max_circumradius_ratio,
        rep.max_faces,
        face_cap(2),
        rep.max_skeleton_distance
    );
    Ok(())
}
