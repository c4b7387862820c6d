use super::{segment_segment_distance, triangle_triangle_distance, Facet, Isometry, Point, Vector};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A closed flat (D−1)-polyhedron: a union of facets in one hyperplane,
/// with an isometry taking that hyperplane to `R^{D-1} × {0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatPolyhedron<const D: usize> {
    pub facets: Vec<Facet<D>>,
    pub frame: Isometry<D>,
}

impl<const D: usize> FlatPolyhedron<D> {
    pub fn new(facets: Vec<Facet<D>>, frame: Isometry<D>) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::Invalid("polyhedron without facets".into()));
        }
        for f in &facets {
            for v in f.vertices() {
                let h = frame.apply(v)[D - 1];
                if h.abs() > 1e-12 {
                    return Err(Error::Invalid(format!("facet off its hyperplane by {h:e}")));
                }
            }
        }
        Ok(Self { facets, frame })
    }

    /// Unit normal of the supporting hyperplane (preimage of `e_D`).
    pub fn normal(&self) -> Vector<D> {
        let mut e = Vector::<D>::zeros();
        e[D - 1] = 1.0;
        self.frame.apply_vector_inverse(&e)
    }

    pub fn area(&self) -> f64 {
        self.facets.iter().map(Facet::area).sum()
    }

    pub fn distance(&self, x: &Point<D>) -> f64 {
        self.facets.iter().map(|f| f.distance(x)).fold(f64::INFINITY, f64::min)
    }

    /// Center and radius of a ball containing the polyhedron.
    pub fn bounding_ball(&self) -> (Point<D>, f64) {
        let mut c = Point::<D>::zeros();
        let mut n = 0.0;
        for f in &self.facets {
            for v in f.vertices() {
                c += v;
                n += 1.0;
            }
        }
        c /= n;
        let r = self
            .facets
            .iter()
            .flat_map(|f| f.vertices().iter())
            .map(|v| (v - c).norm())
            .fold(0.0, f64::max);
        (c, r)
    }

    /// Exact distance between two closed polyhedra.
    pub fn distance_to(&self, other: &Self) -> f64 {
        let mut best = f64::INFINITY;
        for a in &self.facets {
            for b in &other.facets {
                best = best.min(facet_distance(a, b));
            }
        }
        best
    }
}

fn to3<const D: usize>(p: &Point<D>) -> Point<3> {
    Point::<3>::from_fn(|i, _| p[i])
}

fn facet_distance<const D: usize>(a: &Facet<D>, b: &Facet<D>) -> f64 {
    if D == 2 {
        let (p, q) = (a.vertices(), b.vertices());
        return segment_segment_distance(&p[0], &p[1], &q[0], &q[1]);
    }
    let mut best = f64::INFINITY;
    for s in a.simplices() {
        let s = [to3(&s[0]), to3(&s[1]), to3(&s[2])];
        for t in b.simplices() {
            let t = [to3(&t[0]), to3(&t[1]), to3(&t[2])];
            best = best.min(triangle_triangle_distance(&s, &t));
        }
    }
    best
}

/// Pairwise disjoint closed flat polyhedra `P_1, …, P_M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyhedronSet<const D: usize> {
    pieces: Vec<FlatPolyhedron<D>>,
    min_distance: f64,
}

impl<const D: usize> PolyhedronSet<D> {
    pub fn new(pieces: Vec<FlatPolyhedron<D>>) -> Result<Self> {
        let min_distance = min_pair_distance(&pieces);
        if min_distance <= 0.0 {
            return Err(Error::Invalid("flat pieces intersect".into()));
        }
        Ok(Self { pieces, min_distance })
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn pieces(&self) -> &[FlatPolyhedron<D>] {
        &self.pieces
    }

    pub fn piece(&self, i: usize) -> &FlatPolyhedron<D> {
        &self.pieces[i]
    }

    /// `dist(P_i, P_l)`.
    pub fn set_distance(&self, i: usize, l: usize) -> f64 {
        assert_ne!(i, l, "set_distance needs two different pieces");
        self.pieces[i].distance_to(&self.pieces[l])
    }

    /// `min_{i≠l} dist(P_i, P_l)`; infinite for fewer than two pieces.
    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }
}

fn min_pair_distance<const D: usize>(pieces: &[FlatPolyhedron<D>]) -> f64 {
    let balls: Vec<(Point<D>, f64)> = pieces.iter().map(FlatPolyhedron::bounding_ball).collect();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..pieces.len() {
        for l in i + 1..pieces.len() {
            let gap = (balls[i].0 - balls[l].0).norm() - balls[i].1 - balls[l].1;
            pairs.push((gap, i, l));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = f64::INFINITY;
    for (gap, i, l) in pairs {
        if gap >= best {
            break;
        }
        best = best.min(pieces[i].distance_to(&pieces[l]));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: (f64, f64), b: (f64, f64)) -> FlatPolyhedron<2> {
        let (pa, pb) = (Point::<2>::new(a.0, a.1), Point::<2>::new(b.0, b.1));
        let f = Facet::segment(pa, pb).unwrap();
        let frame = Isometry::aligning(f.normal(), &pa);
        FlatPolyhedron::new(vec![f], frame).unwrap()
    }

    #[test]
    fn distances_between_segments() {
        let set = PolyhedronSet::new(vec![seg((0.0, 0.0), (1.0, 0.0)), seg((0.0, 1.0), (1.0, 1.0))]).unwrap();
        assert!((set.set_distance(0, 1) - 1.0).abs() < 1e-15);
        assert!((set.min_distance() / (5.0 * 2.0) - 0.1).abs() < 1e-15);
        let set = PolyhedronSet::new(vec![seg((0.0, 0.0), (1.0, 0.0)), seg((2.0, 0.0), (3.0, 0.0))]).unwrap();
        assert!((set.set_distance(0, 1) - 1.0).abs() < 1e-15);
        let set = PolyhedronSet::new(vec![seg((0.0, 0.0), (1.0, 0.0)), seg((2.0, 1.0), (2.0, 2.0))]).unwrap();
        assert!((set.set_distance(0, 1) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn perpendicular_distance_matches_sampling() {
        let set = PolyhedronSet::new(vec![seg((0.0, 0.0), (1.0, 0.0)), seg((2.0, 1.0), (2.0, 2.0))]).unwrap();
        let mut best = f64::INFINITY;
        for i in 0..=200 {
            for j in 0..=200 {
                let p = Point::<2>::new(i as f64 / 200.0, 0.0);
                let q = Point::<2>::new(2.0, 1.0 + j as f64 / 200.0);
                best = best.min((p - q).norm());
            }
        }
        assert!((set.set_distance(0, 1) - best).abs() < 1e-12);
    }

    #[test]
    fn crossing_pieces_rejected() {
        assert!(PolyhedronSet::new(vec![seg((0.0, 0.0), (1.0, 0.0)), seg((0.5, -0.5), (0.5, 0.5))]).is_err());
    }

    #[test]
    fn squares_in_space() {
        let sq = |z: f64| {
            let pts = vec![
                Point::<3>::new(0.0, 0.0, z),
                Point::<3>::new(1.0, 0.0, z),
                Point::<3>::new(1.0, 1.0, z),
                Point::<3>::new(0.0, 1.0, z),
            ];
            let f = Facet::new(pts, Vector::<3>::z()).unwrap();
            let frame = Isometry::aligning(&Vector::<3>::z(), &Point::<3>::new(0.0, 0.0, z));
            FlatPolyhedron::new(vec![f], frame).unwrap()
        };
        let set = PolyhedronSet::new(vec![sq(0.0), sq(0.75)]).unwrap();
        assert!((set.set_distance(0, 1) - 0.75).abs() < 1e-14);
    }
}
