use super::{point_segment_distance, point_triangle_distance, tangent_basis, Isometry, Point, Vector, COINCIDENCE_TOL};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Flat convex (D−1)-polytope with a unit normal: a segment in 2D, a convex
/// polygon in 3D. Its simplex decomposition is the fan from the first vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FacetRepr<D>", into = "FacetRepr<D>")]
pub struct Facet<const D: usize> {
    vertices: Vec<Point<D>>,
    normal: Vector<D>,
    area: f64,
}

#[derive(Clone, Serialize, Deserialize)]
struct FacetRepr<const D: usize> {
    vertices: Vec<Point<D>>,
    normal: Vector<D>,
}

impl<const D: usize> TryFrom<FacetRepr<D>> for Facet<D> {
    type Error = Error;
    fn try_from(r: FacetRepr<D>) -> Result<Self> {
        Facet::from_parts(r.vertices, r.normal)
    }
}

impl<const D: usize> From<Facet<D>> for FacetRepr<D> {
    fn from(f: Facet<D>) -> Self {
        FacetRepr { vertices: f.vertices, normal: f.normal }
    }
}

fn to3<const D: usize>(p: &Point<D>) -> Point<3> {
    Point::<3>::from_fn(|i, _| p[i])
}

impl<const D: usize> Facet<D> {
    /// Builds a facet from a convex vertex list (any rotational order in 3D)
    /// and a normal; the normal is normalized, the loop reoriented to be
    /// counter-clockwise about it, and duplicate or collinear vertices dropped.
    pub fn new(vertices: Vec<Point<D>>, normal: Vector<D>) -> Result<Self> {
        let len = normal.norm();
        if !(len > 0.0) {
            return Err(Error::DegenerateFacet("zero normal".into()));
        }
        let normal = normal / len;
        let mut vertices = vertices;
        let scale = vertices
            .iter()
            .map(|v| (v - vertices[0]).norm())
            .fold(0.0, f64::max);
        if D == 3 {
            vertices = clean_loop(vertices, &normal, 1e-12 * scale.max(1e-300));
        } else {
            vertices.dedup_by(|a, b| (*a - *b).norm() <= 1e-14 * scale);
        }
        for v in &vertices {
            if normal.dot(&(v - vertices[0])).abs() > COINCIDENCE_TOL {
                return Err(Error::DegenerateFacet("vertices not coplanar".into()));
            }
        }
        Self::from_parts(vertices, normal)
    }

    /// Trusts `normal` and vertex order; only recomputes the measure.
    pub fn from_parts(vertices: Vec<Point<D>>, normal: Vector<D>) -> Result<Self> {
        if vertices.len() != if D == 2 { 2 } else { vertices.len().max(3) } {
            return Err(Error::DegenerateFacet(format!("{} vertices", vertices.len())));
        }
        let mut f = Self { vertices, normal, area: 0.0 };
        f.area = f.simplex_measures().iter().sum();
        if !(f.area > 0.0) {
            return Err(Error::DegenerateFacet("zero area".into()));
        }
        Ok(f)
    }

    /// Segment `a`–`b` with the normal obtained by rotating `b − a` clockwise.
    pub fn segment(a: Point<D>, b: Point<D>) -> Result<Self> {
        assert_eq!(D, 2);
        let t = b - a;
        let mut n = Vector::<D>::zeros();
        n[0] = t[1];
        n[1] = -t[0];
        Self::new(vec![a, b], n)
    }

    pub fn vertices(&self) -> &[Point<D>] {
        &self.vertices
    }

    pub fn normal(&self) -> &Vector<D> {
        &self.normal
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// Signed offset of the supporting hyperplane along the normal.
    pub fn offset(&self) -> f64 {
        self.normal.dot(&self.vertices[0])
    }

    /// Measures of the fan simplices.
    pub fn simplex_measures(&self) -> Vec<f64> {
        if D == 2 {
            return vec![(self.vertices[1] - self.vertices[0]).norm()];
        }
        let a = to3(&self.vertices[0]);
        let n = to3(&self.normal);
        (1..self.vertices.len() - 1)
            .map(|k| {
                let b = to3(&self.vertices[k]) - a;
                let c = to3(&self.vertices[k + 1]) - a;
                0.5 * b.cross(&c).dot(&n)
            })
            .collect()
    }

    /// Fan simplices as vertex lists.
    pub fn simplices(&self) -> Vec<Vec<Point<D>>> {
        if D == 2 {
            return vec![self.vertices.clone()];
        }
        (1..self.vertices.len() - 1)
            .map(|k| vec![self.vertices[0], self.vertices[k], self.vertices[k + 1]])
            .collect()
    }

    pub fn centroid(&self) -> Point<D> {
        if D == 2 {
            return (self.vertices[0] + self.vertices[1]) * 0.5;
        }
        let mut acc = Point::<D>::zeros();
        for (s, m) in self.simplices().iter().zip(self.simplex_measures()) {
            acc += (s[0] + s[1] + s[2]) * (m / 3.0);
        }
        acc / self.area
    }

    /// Smallest and largest coordinates.
    pub fn bounding_box(&self) -> (Point<D>, Point<D>) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices[1..] {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    pub fn distance(&self, x: &Point<D>) -> f64 {
        if D == 2 {
            return point_segment_distance(x, &self.vertices[0], &self.vertices[1]);
        }
        let p = to3(x);
        let a = to3(&self.vertices[0]);
        (1..self.vertices.len() - 1)
            .map(|k| point_triangle_distance(&p, &a, &to3(&self.vertices[k]), &to3(&self.vertices[k + 1])))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn transformed(&self, iso: &Isometry<D>) -> Self {
        Self {
            vertices: self.vertices.iter().map(|v| iso.apply(v)).collect(),
            normal: iso.apply_vector(&self.normal),
            area: self.area,
        }
    }

    /// Whether both facets lie in the same hyperplane (either orientation).
    pub fn coplanar_with(&self, other: &Self) -> bool {
        let c = self.normal.dot(&other.normal);
        if c.abs() < 1.0 - 1e-9 {
            return false;
        }
        other
            .vertices
            .iter()
            .all(|v| self.normal.dot(&(v - self.vertices[0])).abs() <= COINCIDENCE_TOL)
    }

    /// (D−1)-measure of the intersection with a coplanar facet; 0 otherwise.
    pub fn overlap(&self, other: &Self) -> f64 {
        if !self.coplanar_with(other) {
            return 0.0;
        }
        let basis = tangent_basis(&self.normal);
        let origin = self.vertices[0];
        let local = |v: &Point<D>| -> (f64, f64) {
            let d = v - origin;
            (d.dot(&basis[0]), if D == 3 { d.dot(&basis[1]) } else { 0.0 })
        };
        if D == 2 {
            let (a0, a1) = (local(&self.vertices[0]).0, local(&self.vertices[1]).0);
            let (b0, b1) = (local(&other.vertices[0]).0, local(&other.vertices[1]).0);
            let lo = a0.min(a1).max(b0.min(b1));
            let hi = a0.max(a1).min(b0.max(b1));
            return (hi - lo).max(0.0);
        }
        let a: Vec<(f64, f64)> = self.vertices.iter().map(local).collect();
        let mut b: Vec<(f64, f64)> = other.vertices.iter().map(local).collect();
        if polygon_area(&b) < 0.0 {
            b.reverse();
        }
        let mut a = a;
        if polygon_area(&a) < 0.0 {
            a.reverse();
        }
        clip_convex(&a, &b).map(|p| polygon_area(&p)).unwrap_or(0.0).max(0.0)
    }
}

/// Drops duplicate and collinear vertices and orients the loop about `normal`.
fn clean_loop<const D: usize>(mut v: Vec<Point<D>>, normal: &Vector<D>, tol: f64) -> Vec<Point<D>> {
    let n3 = to3(normal);
    let mut changed = true;
    while changed && v.len() >= 3 {
        changed = false;
        for k in 0..v.len() {
            let prev = to3(&v[(k + v.len() - 1) % v.len()]);
            let cur = to3(&v[k]);
            let next = to3(&v[(k + 1) % v.len()]);
            let cross = (cur - prev).cross(&(next - cur)).dot(&n3);
            let dup = (cur - prev).norm() <= tol || (next - cur).norm() <= tol;
            if dup || cross.abs() <= tol * ((cur - prev).norm() + (next - cur).norm()) {
                v.remove(k);
                changed = true;
                break;
            }
        }
    }
    if v.len() >= 3 {
        let a = to3(&v[0]);
        let signed: f64 = (1..v.len() - 1)
            .map(|k| (to3(&v[k]) - a).cross(&(to3(&v[k + 1]) - a)).dot(&n3))
            .sum();
        if signed < 0.0 {
            v.reverse();
        }
    }
    v
}

pub(crate) fn polygon_area(p: &[(f64, f64)]) -> f64 {
    let n = p.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum::<f64>()
}

/// Sutherland–Hodgman clipping of `subject` by the convex counter-clockwise `clip`.
pub(crate) fn clip_convex(subject: &[(f64, f64)], clip: &[(f64, f64)]) -> Option<Vec<(f64, f64)>> {
    let mut out = subject.to_vec();
    for i in 0..clip.len() {
        let (a, b) = (clip[i], clip[(i + 1) % clip.len()]);
        let side = |p: (f64, f64)| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
        let input = std::mem::take(&mut out);
        if input.is_empty() {
            return None;
        }
        for j in 0..input.len() {
            let (p, q) = (input[j], input[(j + 1) % input.len()]);
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push((p.0 + (q.0 - p.0) * t, p.1 + (q.1 - p.1) * t));
            }
        }
    }
    if out.len() < 3 {
        None
    } else {
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn segment_lengths() {
        let f = Facet::segment(Point::<2>::new(0.0, 0.0), Point::<2>::new(1.0, 0.0)).unwrap();
        assert_eq!(f.area(), 1.0);
        assert_eq!(*f.normal(), Vector::<2>::new(0.0, -1.0));
        let f = Facet::segment(Point::<2>::new(0.0, 0.0), Point::<2>::new(3.0, 4.0)).unwrap();
        assert!((f.area() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn unit_square_in_space_is_two_triangles() {
        let pts = vec![
            Point::<3>::new(0.0, 0.0, 0.0),
            Point::<3>::new(1.0, 0.0, 0.0),
            Point::<3>::new(1.0, 1.0, 0.0),
            Point::<3>::new(0.0, 1.0, 0.0),
        ];
        let f = Facet::new(pts, Vector::<3>::new(0.0, 0.0, -2.0)).unwrap();
        let m = f.simplex_measures();
        assert_eq!(m.len(), 2);
        assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((f.area() - 1.0).abs() < 1e-15);
        assert!((f.normal().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_facets_rejected() {
        let p = Point::<2>::new(0.3, 0.3);
        assert!(Facet::segment(p, p).is_err());
        let line = vec![Point::<3>::zeros(), Point::<3>::x(), Point::<3>::x() * 2.0];
        assert!(Facet::new(line, Vector::<3>::z()).is_err());
    }

    #[test]
    fn overlaps() {
        let a = Facet::segment(Point::<2>::new(0.0, 0.0), Point::<2>::new(1.0, 0.0)).unwrap();
        let b = Facet::segment(Point::<2>::new(1.5, 0.0), Point::<2>::new(0.25, 0.0)).unwrap();
        assert!((a.overlap(&b) - 0.75).abs() < 1e-15);
        let c = Facet::segment(Point::<2>::new(0.0, 0.1), Point::<2>::new(1.0, 0.1)).unwrap();
        assert_eq!(a.overlap(&c), 0.0);
        let sq = |x0: f64| {
            Facet::new(
                vec![
                    Point::<3>::new(x0, 0.0, 0.0),
                    Point::<3>::new(x0 + 1.0, 0.0, 0.0),
                    Point::<3>::new(x0 + 1.0, 1.0, 0.0),
                    Point::<3>::new(x0, 1.0, 0.0),
                ],
                Vector::<3>::z(),
            )
            .unwrap()
        };
        assert!((sq(0.0).overlap(&sq(0.4)) - 0.6).abs() < 1e-14);
    }

    #[test]
    fn measure_invariant_under_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Facet::new(
            vec![
                Point::<3>::new(0.0, 0.0, 0.2),
                Point::<3>::new(0.7, 0.1, 0.2),
                Point::<3>::new(0.5, 0.9, 0.2),
                Point::<3>::new(-0.2, 0.4, 0.2),
            ],
            Vector::<3>::z(),
        )
        .unwrap();
        for _ in 0..20 {
            let iso = Isometry::<3>::random(&mut rng, 3.0);
            let moved = Facet::new(f.vertices().iter().map(|v| iso.apply(v)).collect(), iso.apply_vector(f.normal()))
                .unwrap();
            assert!((moved.area() - f.area()).abs() <= 1e-12 * f.area());
        }
    }

    #[test]
    fn serde_round_trip() {
        let f = Facet::segment(Point::<2>::new(0.1, 0.2), Point::<2>::new(0.3, 0.7)).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let g: Facet<2> = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
