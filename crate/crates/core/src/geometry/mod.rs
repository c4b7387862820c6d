//! Points, isometries, convex polytopes, facets and distances in two and
//! three dimensions.

pub mod aabb;
pub mod facet;
pub mod hash;
pub mod isometry;
pub mod kdtree;
pub mod polyset;
pub mod polytope;

pub use aabb::AabbTree;
pub use facet::Facet;
pub use isometry::Isometry;
pub use kdtree::KdTree;
pub use polyset::{FlatPolyhedron, PolyhedronSet};
pub use polytope::{ConvexPolytope, Face, HalfSpace};

use nalgebra::{SMatrix, SVector};

pub type Point<const D: usize> = SVector<f64, D>;
pub type Vector<const D: usize> = SVector<f64, D>;
pub type Matrix<const D: usize> = SMatrix<f64, D, D>;

/// Absolute tolerance for geometric coincidence (coordinates are O(1)).
pub const COINCIDENCE_TOL: f64 = 1e-9;
/// Tolerance for orthogonality and unit-length checks.
pub const ORTHO_TOL: f64 = 1e-12;

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance<const D: usize>(p: &Point<D>, a: &Point<D>, b: &Point<D>) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance between segments `[a, b]` and `[c, d]`.
pub fn segment_segment_distance<const D: usize>(
    a: &Point<D>,
    b: &Point<D>,
    c: &Point<D>,
    d: &Point<D>,
) -> f64 {
    let u = b - a;
    let v = d - c;
    let w = a - c;
    let uu = u.dot(&u);
    let uv = u.dot(&v);
    let vv = v.dot(&v);
    let uw = u.dot(&w);
    let vw = v.dot(&w);
    let den = uu * vv - uv * uv;
    let mut best = point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b));
    if den > 1e-14 * uu * vv && den > 0.0 {
        let s = (uv * vw - vv * uw) / den;
        let t = (uu * vw - uv * uw) / den;
        if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t) {
            best = best.min((w + u * s - v * t).norm());
        }
    }
    best
}

/// Distance from `p` to the triangle `abc` in three dimensions.
pub fn point_triangle_distance(
    p: &Point<3>,
    a: &Point<3>,
    b: &Point<3>,
    c: &Point<3>,
) -> f64 {
    let n = (b - a).cross(&(c - a));
    let nn = n.norm();
    if nn > 0.0 {
        let n = n / nn;
        let h = (p - a).dot(&n);
        let q = p - n * h;
        let inside = [(a, b), (b, c), (c, a)]
            .iter()
            .all(|(s, e)| (*e - *s).cross(&(q - *s)).dot(&n) >= 0.0);
        if inside {
            return h.abs();
        }
    }
    point_segment_distance(p, a, b)
        .min(point_segment_distance(p, b, c))
        .min(point_segment_distance(p, c, a))
}

/// Distance between two triangles in three dimensions.
pub fn triangle_triangle_distance(t: &[Point<3>; 3], s: &[Point<3>; 3]) -> f64 {
    if triangles_intersect(t, s) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for i in 0..3 {
        best = best.min(point_triangle_distance(&t[i], &s[0], &s[1], &s[2]));
        best = best.min(point_triangle_distance(&s[i], &t[0], &t[1], &t[2]));
        for j in 0..3 {
            best = best.min(segment_segment_distance(
                &t[i],
                &t[(i + 1) % 3],
                &s[j],
                &s[(j + 1) % 3],
            ));
        }
    }
    best
}

fn segment_hits_triangle(p: &Point<3>, q: &Point<3>, t: &[Point<3>; 3]) -> bool {
    let n = (t[1] - t[0]).cross(&(t[2] - t[0]));
    let dp = (p - t[0]).dot(&n);
    let dq = (q - t[0]).dot(&n);
    if dp * dq > 0.0 || dp == dq {
        return false;
    }
    let x = p + (q - p) * (dp / (dp - dq));
    (0..3).all(|i| {
        let e = t[(i + 1) % 3] - t[i];
        e.cross(&(x - t[i])).dot(&n) >= 0.0
    })
}

fn triangles_intersect(t: &[Point<3>; 3], s: &[Point<3>; 3]) -> bool {
    (0..3).any(|i| segment_hits_triangle(&t[i], &t[(i + 1) % 3], s))
        || (0..3).any(|i| segment_hits_triangle(&s[i], &s[(i + 1) % 3], t))
}

/// An orthonormal basis of the hyperplane orthogonal to the unit vector `n`.
pub fn tangent_basis<const D: usize>(n: &Vector<D>) -> Vec<Vector<D>> {
    let q = Isometry::aligning(n, &Point::<D>::zeros()).rotation;
    (0..D - 1).map(|k| q.row(k).transpose()).collect()
}

/// Determinant of a 1×1, 2×2 or 3×3 matrix.
pub fn det<const D: usize>(m: &Matrix<D>) -> f64 {
    match D {
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
        _ => panic!("det is implemented for D <= 3"),
    }
}

/// Solves `a x = b` by Cramer's rule; `None` when `a` is numerically singular.
pub fn solve<const D: usize>(a: &Matrix<D>, b: &Vector<D>) -> Option<Vector<D>> {
    let d = det(a);
    let scale = a.abs().max().powi(D as i32);
    if d.abs() <= 1e-14 * scale || scale == 0.0 {
        return None;
    }
    Some(Vector::<D>::from_fn(|i, _| {
        let mut m = *a;
        m.set_column(i, b);
        det(&m) / d
    }))
}
