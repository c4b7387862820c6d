use crate::geometry::{AabbTree, Point, PolyhedronSet};

/// Nearest-piece queries over a set of flat pieces.
#[derive(Clone, Debug)]
pub struct PieceLocator<'a, const D: usize> {
    set: &'a PolyhedronSet<D>,
    boxes: AabbTree<D>,
}

impl<'a, const D: usize> PieceLocator<'a, D> {
    pub fn new(set: &'a PolyhedronSet<D>) -> Self {
        let boxes = set
            .pieces()
            .iter()
            .map(|p| {
                let mut b = p.facets[0].bounding_box();
                for f in &p.facets[1..] {
                    let (lo, hi) = f.bounding_box();
                    b = (b.0.inf(&lo), b.1.sup(&hi));
                }
                b
            })
            .collect();
        Self { set, boxes: AabbTree::new(boxes) }
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn distance(&self, x: &Point<D>, j: usize) -> f64 {
        self.set.piece(j).distance(x)
    }

    /// The two nearest pieces as `(distance, index)`, ignoring `skip`;
    /// missing entries are `(∞, usize::MAX)`.
    pub fn nearest_two(&self, x: &Point<D>, skip: Option<usize>) -> [(f64, usize); 2] {
        let mut best = [(f64::INFINITY, usize::MAX); 2];
        let found = self.boxes.nearest_by(x, 2, |j| (Some(j) != skip).then(|| self.distance(x, j)));
        for (b, f) in best.iter_mut().zip(found) {
            *b = f;
        }
        best
    }

    /// Pieces whose distance to `x` is below `r`.
    pub fn within(&self, x: &Point<D>, r: f64) -> Vec<(usize, f64)> {
        self.boxes
            .query_ball(x, r)
            .into_iter()
            .filter_map(|j| {
                let d = self.distance(x, j);
                (d < r).then_some((j, d))
            })
            .collect()
    }
}

/// Distance from `x` to the boundary of the box (negative outside).
pub fn box_distance<const D: usize>(x: &Point<D>, bounds: &(Point<D>, Point<D>)) -> f64 {
    (0..D).map(|i| (x[i] - bounds.0[i]).min(bounds.1[i] - x[i])).fold(f64::INFINITY, f64::min)
}
