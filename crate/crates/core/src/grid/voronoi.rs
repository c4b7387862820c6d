use crate::error::Result;
use crate::geometry::polytope::is_box_source;
use crate::geometry::{ConvexPolytope, HalfSpace, KdTree, Point};

/// Voronoi cells of a generator set, clipped to a box. Face sources are
/// generator indices (or box tags).
#[derive(Clone, Debug)]
pub struct Tessellation<const D: usize> {
    pub cells: Vec<ConvexPolytope<D>>,
    tree: KdTree<D>,
}

impl<const D: usize> Tessellation<D> {
    pub fn generators(&self) -> &[Point<D>] {
        self.tree.points()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Index of the generator nearest to `x` (lowest index on ties).
    pub fn nearest(&self, x: &Point<D>) -> Option<usize> {
        self.tree.nearest(x).map(|n| n.0)
    }

    /// Distance from `x` to the union of the interior faces.
    pub fn skeleton_distance(&self, x: &Point<D>) -> f64 {
        let Some(q) = self.nearest(x) else {
            return f64::INFINITY;
        };
        let cell = &self.cells[q];
        (0..cell.faces().len())
            .filter(|&k| !is_box_source(cell.faces()[k].source))
            .map(|k| cell.distance_to_face(k, x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn into_cells(self) -> (Vec<ConvexPolytope<D>>, Vec<Point<D>>) {
        let pts = self.tree.points().to_vec();
        (self.cells, pts)
    }
}

/// Cell of generator `q` cut only by its nearest neighbors: neighbors are
/// taken in order of distance until the next one is farther than twice the
/// largest vertex distance, beyond which no bisector can touch the cell.
fn culled_cell<const D: usize>(tree: &KdTree<D>, q: usize, bounds: &(Point<D>, Point<D>)) -> Result<ConvexPolytope<D>> {
    let pts = tree.points();
    let x = pts[q];
    let mut cell = ConvexPolytope::from_box(&bounds.0, &bounds.1);
    let mut done = 0;
    let mut k = 16.min(pts.len());
    loop {
        let near = tree.k_nearest(&x, k);
        for &(s, d) in &near[done..] {
            if s == q {
                continue;
            }
            if d > 2.0 * cell.circumradius_about(&x) {
                return Ok(cell);
            }
            cell.clip(&HalfSpace::bisector(&x, &pts[s]), s)?;
        }
        done = near.len();
        if k >= pts.len() {
            return Ok(cell);
        }
        k = (2 * k).min(pts.len());
    }
}

/// Voronoi tessellation of `points` inside the box.
pub fn voronoi<const D: usize>(points: Vec<Point<D>>, bounds: (Point<D>, Point<D>)) -> Result<Tessellation<D>> {
    let tree = KdTree::new(points);
    let cells = (0..tree.len()).map(|q| culled_cell(&tree, q, &bounds)).collect::<Result<Vec<_>>>()?;
    Ok(Tessellation { cells, tree })
}

/// Cell of generator `q` clipped against every other generator.
pub fn brute_force_cell<const D: usize>(
    points: &[Point<D>],
    q: usize,
    bounds: &(Point<D>, Point<D>),
) -> Result<ConvexPolytope<D>> {
    let mut cell = ConvexPolytope::from_box(&bounds.0, &bounds.1);
    for (s, p) in points.iter().enumerate() {
        if s != q {
            cell.clip(&HalfSpace::bisector(&points[q], p), s)?;
        }
    }
    Ok(cell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lattice_cells_are_squares() {
        let pts: Vec<Point<2>> =
            (0..4).flat_map(|i| (0..4).map(move |j| Point::<2>::new(0.125 + 0.25 * i as f64, 0.125 + 0.25 * j as f64))).collect();
        let t = voronoi(pts, (Point::<2>::zeros(), Point::<2>::repeat(1.0))).unwrap();
        for c in &t.cells {
            assert!((c.volume() - 0.0625).abs() < 1e-14);
        }
        assert!(t.skeleton_distance(&Point::<2>::new(0.25, 0.4)) < 1e-15);
        assert!((t.skeleton_distance(&Point::<2>::new(0.1, 0.125)) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn culled_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bounds = (Point::<3>::zeros(), Point::<3>::repeat(1.0));
        let pts: Vec<Point<3>> = (0..300).map(|_| Point::<3>::from_fn(|_, _| rng.gen())).collect();
        let t = voronoi(pts.clone(), bounds).unwrap();
        let total: f64 = t.cells.iter().map(|c| c.volume()).sum();
        assert!((total - 1.0).abs() < 1e-9);
        for q in (0..300).step_by(37) {
            let b = brute_force_cell(&pts, q, &bounds).unwrap();
            assert!((b.volume() - t.cells[q].volume()).abs() < 1e-12);
            assert_eq!(b.vertices().len(), t.cells[q].vertices().len());
        }
    }
}
