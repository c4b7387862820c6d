use super::seeds::SeedSet;
use super::voronoi::Tessellation;
use crate::geometry::polytope::is_box_source;
use crate::geometry::{KdTree, Point, PolyhedronSet};
use crate::partition::sampling::QuasiRandom;
use serde::{Deserialize, Serialize};

/// Measured quality of a tessellation against the sandwich bounds
/// `inradius >= s/(2n)` and `circumradius <= n s` (ratios to the bound).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TessellationReport {
    pub cells: usize,
    /// Smallest `inradius / bound`; the bound holds when this is `>= 1`.
    pub min_inradius_ratio: f64,
    /// Largest `circumradius / bound`; the bound holds when this is `<= 1`.
    pub max_circumradius_ratio: f64,
    pub max_faces: usize,
    /// Largest distance from a sampled piece point to the skeleton.
    pub max_skeleton_distance: f64,
    pub min_separation: f64,
}

impl TessellationReport {
    pub fn sandwich_holds(&self) -> bool {
        self.min_inradius_ratio >= 1.0 && self.max_circumradius_ratio <= 1.0
    }
}

/// `(4n²)ⁿ`: 256 at n = 2, 46656 at n = 3.
pub fn face_cap(n: usize) -> usize {
    (4 * n * n).pow(n as u32)
}

/// Points on each piece: facet vertices plus a barycentric grid of `k` steps per simplex.
pub fn piece_samples<const D: usize>(pieces: &PolyhedronSet<D>, k: usize) -> Vec<Point<D>> {
    let k = k.max(1);
    let mut out = Vec::new();
    for p in pieces.pieces() {
        for f in &p.facets {
            for s in f.simplices() {
                if s.len() == 2 {
                    for i in 0..=k {
                        let t = i as f64 / k as f64;
                        out.push(s[0] + (s[1] - s[0]) * t);
                    }
                } else {
                    for i in 0..=k {
                        for j in 0..=k - i {
                            let (a, b) = (i as f64 / k as f64, j as f64 / k as f64);
                            out.push(s[0] + (s[1] - s[0]) * a + (s[2] - s[0]) * b);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn check_tessellation<const D: usize>(
    seeds: &SeedSet<D>,
    tess: &Tessellation<D>,
    pieces: &PolyhedronSet<D>,
    samples: usize,
) -> TessellationReport {
    let n = D as f64;
    let gens = tess.generators();
    let mut min_in = f64::INFINITY;
    let mut max_circ: f64 = 0.0;
    let mut max_faces = 0;
    let mut min_sep = f64::INFINITY;
    for (q, cell) in tess.cells.iter().enumerate() {
        let x = gens[q];
        let sq = seeds.sizes[q];
        let (mut lower, mut upper) = (f64::INFINITY, sq);
        for f in cell.faces() {
            if is_box_source(f.source) {
                lower = lower.min(sq);
            } else {
                let sp = seeds.sizes[f.source];
                lower = lower.min(sq.min(sp));
                upper = upper.max(sp);
                min_sep = min_sep.min((gens[f.source] - x).norm());
            }
        }
        if !seeds.graded {
            lower = seeds.delta;
            upper = seeds.delta;
        }
        min_in = min_in.min(cell.inradius_about(&x) / (lower / (2.0 * n)));
        max_circ = max_circ.max(cell.circumradius_about(&x) / (n * upper));
        max_faces = max_faces.max(cell.faces().len());
    }
    let max_skel = piece_samples(pieces, samples).iter().map(|x| tess.skeleton_distance(x)).fold(0.0, f64::max);
    TessellationReport {
        cells: tess.len(),
        min_inradius_ratio: min_in,
        max_circumradius_ratio: max_circ,
        max_faces,
        max_skeleton_distance: max_skel,
        min_separation: min_sep,
    }
}

/// Measured separation and covering radius of a seed set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub min_distance: f64,
    /// Largest nearest-seed distance over the sampled box points.
    pub covering_radius: f64,
}

/// Minimum pairwise seed distance and a sampled covering radius
/// (`samples` quasi-random box points, nearest seed by kd-tree).
pub fn thin_separation_check<const D: usize>(seeds: &SeedSet<D>, samples: usize, seed: u64) -> SeparationReport {
    let tree = KdTree::new(seeds.points.clone());
    let mut min_distance = f64::INFINITY;
    for p in &seeds.points {
        if let Some(&(_, d)) = tree.k_nearest(p, 2).get(1) {
            min_distance = min_distance.min(d);
        }
    }
    let mut qr = QuasiRandom::<D>::new(seed);
    let mut covering_radius: f64 = 0.0;
    for _ in 0..samples {
        let x = qr.next_in_box(&seeds.bounds.0, &seeds.bounds.1);
        if let Some((_, d)) = tree.nearest(&x) {
            covering_radius = covering_radius.max(d);
        }
    }
    SeparationReport { min_distance, covering_radius }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Facet, FlatPolyhedron, Isometry};
    use crate::grid::{build_seed_set, voronoi};

    fn seg(a: (f64, f64), b: (f64, f64)) -> FlatPolyhedron<2> {
        let (pa, pb) = (Point::<2>::new(a.0, a.1), Point::<2>::new(b.0, b.1));
        let f = Facet::segment(pa, pb).unwrap();
        let frame = Isometry::aligning(f.normal(), &((pa + pb) * 0.5));
        FlatPolyhedron::new(vec![f], frame).unwrap()
    }

    #[test]
    fn lattice_separation() {
        let set = PolyhedronSet::<2>::new(Vec::new()).unwrap();
        let s = build_seed_set(&set, 0.1, (Point::<2>::zeros(), Point::<2>::repeat(1.0))).unwrap();
        let r = thin_separation_check(&s, 10_000, 1);
        assert!((r.min_distance - 0.1).abs() < 1e-12);
        assert!(r.covering_radius <= 0.1 * 0.5f64.sqrt() + 1e-12);
        let t = voronoi(s.points.clone(), s.bounds).unwrap();
        for c in &t.cells {
            assert_eq!(c.faces().len(), 4);
            assert!((c.volume() - 0.01).abs() < 1e-14);
        }
    }

    #[test]
    fn tilted_segment_lies_on_the_skeleton() {
        let set = PolyhedronSet::new(vec![seg((0.3, 0.35), (0.7, 0.6))]).unwrap();
        let bounds = (Point::<2>::zeros(), Point::<2>::repeat(1.0));
        let d0 = crate::grid::delta0(&set, &bounds).unwrap();
        let s = build_seed_set(&set, 0.9 * d0 / 4.0, bounds).unwrap();
        let t = voronoi(s.points.clone(), bounds).unwrap();
        let rep = check_tessellation(&s, &t, &set, 1000);
        assert!(rep.max_skeleton_distance <= 1e-9, "{rep:?}");
        assert!(rep.sandwich_holds(), "{rep:?}");
        assert!(rep.max_faces <= face_cap(2));
        let sep = thin_separation_check(&s, 10_000, 3);
        assert!(sep.min_distance >= s.delta / 2.0 && sep.covering_radius <= 2.0 * s.delta);
    }

    fn ring(m: usize) -> PolyhedronSet<2> {
        let pieces = (0..m)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / m as f64;
                let h = 0.3 * std::f64::consts::PI / m as f64 * 0.8;
                let (c, d) = (Point::<2>::new(0.5 + 0.3 * t.cos(), 0.5 + 0.3 * t.sin()), nalgebra::Vector2::new(-t.sin(), t.cos()));
                seg(((c - d * h)[0], (c - d * h)[1]), ((c + d * h)[0], (c + d * h)[1]))
            })
            .collect();
        PolyhedronSet::new(pieces).unwrap()
    }

    #[test]
    fn graded_ring() {
        let set = ring(40);
        let bounds = (Point::<2>::zeros(), Point::<2>::repeat(1.0));
        let s = crate::grid::build_graded_seed_set(&set, bounds, crate::grid::GradedOptions::for_box(&bounds)).unwrap();
        let t = voronoi(s.points.clone(), bounds).unwrap();
        let rep = check_tessellation(&s, &t, &set, 200);
        assert!(rep.max_skeleton_distance <= 1e-9, "{rep:?}");
        assert!(rep.sandwich_holds(), "{rep:?}");
        let vol: f64 = t.cells.iter().map(|c| c.volume()).sum();
        assert!((vol - 1.0).abs() < 1e-9);
    }

    fn triangle(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> FlatPolyhedron<3> {
        let (a, b, c) = (Point::<3>::from(a), Point::<3>::from(b), Point::<3>::from(c));
        let n = (b - a).cross(&(c - a)).normalize();
        let frame = Isometry::aligning(&n, &a);
        FlatPolyhedron::new(vec![Facet::new(vec![a, b, c], n).unwrap()], frame).unwrap()
    }

    #[test]
    fn graded_triangles_in_3d() {
        let set = PolyhedronSet::new(vec![
            triangle([0.3, 0.3, 0.4], [0.7, 0.35, 0.45], [0.4, 0.7, 0.35]),
            triangle([0.3, 0.3, 0.6], [0.7, 0.3, 0.6], [0.5, 0.7, 0.7]),
        ])
        .unwrap();
        let bounds = (Point::<3>::zeros(), Point::<3>::repeat(1.0));
        let s = crate::grid::build_graded_seed_set(&set, bounds, crate::grid::GradedOptions::for_box(&bounds)).unwrap();
        let t = voronoi(s.points.clone(), bounds).unwrap();
        let rep = check_tessellation(&s, &t, &set, 30);
        assert!(rep.max_skeleton_distance <= 1e-9, "{rep:?}");
        assert!(rep.sandwich_holds(), "{rep:?}");
        assert!(rep.max_faces <= face_cap(3));
    }
}
