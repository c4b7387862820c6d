//! Convex clipping, Voronoi cells and facet distances.
use polypart::geometry::{ConvexPolytope, Facet, HalfSpace, Point, Vector};
use polypart::grid::{brute_force_cell, voronoi};

fn main() -> anyhow::Result<()> {
    let mut cube = ConvexPolytope::<3>::from_box(&Point::<3>::zeros(), &Point::<3>::repeat(1.0));
    let n = Vector::<3>::new(1.0, 1.0, 1.0);
    cube.clip(&HalfSpace::new(n, 1.5), 0)?;
    println!("cube below x+y+z=1.5: volume {:.6}, {} faces, {} vertices", cube.volume(), cube.num_faces(), cube.vertices().len());

    let pts: Vec<Point<2>> = (0..5).flat_map(|i| (0..5).map(move |j| Point::<2>::new(0.1 + 0.2 * i as f64 + 0.03 * j as f64, 0.1 + 0.2 * j as f64))).collect();
    let bounds = (Point::<2>::zeros(), Point::<2>::repeat(1.0));
    let t = voronoi(pts.clone(), bounds)?;
    let q = 12;
    let brute = brute_force_cell(t.generators(), q, &bounds)?;
    println!("cell {q}: area {:.6} (brute force {:.6})", t.cells[q].volume(), brute.volume());

    let f = Facet::segment(Point::<2>::new(0.2, 0.5), Point::<2>::new(0.8, 0.5))?;
    let x = Point::<2>::new(1.0, 0.9);
    println!("distance from {:?} to the segment: {:.6}", x.as_slice(), f.distance(&x));
    Ok(())
}
