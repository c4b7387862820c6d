use crate::error::{Error, Result};
use crate::geometry::{point_segment_distance, Point, Vector};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Bounded planar domain: a disc or a convex polygon (counter-clockwise).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Disc { center: [f64; 2], radius: f64 },
    ConvexPolygon { vertices: Vec<[f64; 2]> },
}

fn pt(a: &[f64; 2]) -> Point<2> {
    Point::<2>::new(a[0], a[1])
}

impl Domain {
    pub fn unit_square() -> Self {
        Domain::ConvexPolygon { vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]] }
    }

    pub fn disc(center: Point<2>, radius: f64) -> Self {
        Domain::Disc { center: [center[0], center[1]], radius }
    }

    /// Checks orientation, convexity and that the inradius is at least 1e-3.
    pub fn validate(&self) -> Result<()> {
        if let Domain::ConvexPolygon { vertices } = self {
            if vertices.len() < 3 {
                return Err(Error::DegenerateDomain("polygon with fewer than 3 vertices".into()));
            }
            let n = vertices.len();
            for i in 0..n {
                let (a, b, c) = (pt(&vertices[i]), pt(&vertices[(i + 1) % n]), pt(&vertices[(i + 2) % n]));
                let (u, v) = (b - a, c - b);
                if u[0] * v[1] - u[1] * v[0] <= 0.0 {
                    return Err(Error::DegenerateDomain("polygon not strictly convex and counter-clockwise".into()));
                }
            }
        }
        let r = self.inradius();
        if !(r >= 1e-3) {
            return Err(Error::DegenerateDomain(format!("inradius {r:e} below 1e-3")));
        }
        Ok(())
    }

    pub fn edges(&self) -> Vec<(Point<2>, Point<2>)> {
        match self {
            Domain::Disc { .. } => Vec::new(),
            Domain::ConvexPolygon { vertices } => {
                let n = vertices.len();
                (0..n).map(|i| (pt(&vertices[i]), pt(&vertices[(i + 1) % n]))).collect()
            }
        }
    }

    /// Outward unit normal of edge `(a, b)`.
    pub fn edge_normal(a: &Point<2>, b: &Point<2>) -> Vector<2> {
        let t = (b - a).normalize();
        Vector::<2>::new(t[1], -t[0])
    }

    /// Negative inside, exact Euclidean distance outside.
    pub fn signed_distance(&self, p: &Point<2>) -> f64 {
        match self {
            Domain::Disc { center, radius } => (p - pt(center)).norm() - radius,
            Domain::ConvexPolygon { vertices } => {
                let n = vertices.len();
                let edges = (0..n).map(|i| (pt(&vertices[i]), pt(&vertices[(i + 1) % n])));
                let inside = edges.clone().map(|(a, b)| Self::edge_normal(&a, &b).dot(&(p - a))).fold(f64::NEG_INFINITY, f64::max);
                if inside <= 0.0 {
                    inside
                } else {
                    edges.map(|(a, b)| point_segment_distance(p, &a, &b)).fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Closed membership.
    pub fn contains(&self, p: &Point<2>) -> bool {
        self.signed_distance(p) <= 0.0
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            Domain::Disc { radius, .. } => TAU * radius,
            Domain::ConvexPolygon { .. } => self.edges().iter().map(|(a, b)| (b - a).norm()).sum(),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Domain::Disc { radius, .. } => 0.5 * TAU * radius * radius,
            Domain::ConvexPolygon { .. } => {
                0.5 * self.edges().iter().map(|(a, b)| a[0] * b[1] - a[1] * b[0]).sum::<f64>()
            }
        }
    }

    /// Disc radius; for polygons the distance from the vertex centroid to
    /// the nearest edge line (a lower bound of the true inradius).
    pub fn inradius(&self) -> f64 {
        match self {
            Domain::Disc { radius, .. } => *radius,
            Domain::ConvexPolygon { vertices } => {
                let c = vertices.iter().map(pt).fold(Point::<2>::zeros(), |s, v| s + v) / vertices.len() as f64;
                self.edges()
                    .iter()
                    .map(|(a, b)| -Self::edge_normal(a, b).dot(&(c - a)))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn shortest_edge(&self) -> f64 {
        self.edges().iter().map(|(a, b)| (b - a).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn bounding_box(&self) -> (Point<2>, Point<2>) {
        match self {
            Domain::Disc { center, radius } => (pt(center).add_scalar(-radius), pt(center).add_scalar(*radius)),
            Domain::ConvexPolygon { vertices } => {
                let mut lo = pt(&vertices[0]);
                let mut hi = lo;
                for v in vertices {
                    lo = lo.inf(&pt(v));
                    hi = hi.sup(&pt(v));
                }
                (lo, hi)
            }
        }
    }

    /// Parameter interval `[s0, s1] ⊂ [0, 1]` of `a + s (b − a)` inside the domain.
    pub fn clip_segment(&self, a: &Point<2>, b: &Point<2>) -> Option<(f64, f64)> {
        let d = b - a;
        let (mut s0, mut s1) = (0.0f64, 1.0f64);
        match self {
            Domain::Disc { center, radius } => {
                let m = a - pt(center);
                let qa = d.norm_squared();
                let qb = 2.0 * m.dot(&d);
                let qc = m.norm_squared() - radius * radius;
                if qa == 0.0 {
                    return (qc <= 0.0).then_some((0.0, 1.0));
                }
                let disc = qb * qb - 4.0 * qa * qc;
                if disc < 0.0 {
                    return None;
                }
                let r = disc.sqrt();
                s0 = s0.max((-qb - r) / (2.0 * qa));
                s1 = s1.min((-qb + r) / (2.0 * qa));
            }
            Domain::ConvexPolygon { .. } => {
                for (p, q) in self.edges() {
                    let n = Self::edge_normal(&p, &q);
                    let num = n.dot(&(a - p));
                    let den = n.dot(&d);
                    if den == 0.0 {
                        if num > 0.0 {
                            return None;
                        }
                    } else {
                        let s = -num / den;
                        if den > 0.0 {
                            s1 = s1.min(s);
                        } else {
                            s0 = s0.max(s);
                        }
                    }
                }
            }
        }
        (s1 > s0).then_some((s0, s1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_basics() {
        let d = Domain::unit_square();
        d.validate().unwrap();
        assert_eq!(d.perimeter(), 4.0);
        assert_eq!(d.area(), 1.0);
        assert_eq!(d.inradius(), 0.5);
        assert!(d.contains(&Point::<2>::new(1.0, 0.5)));
        assert!((d.signed_distance(&Point::<2>::new(2.0, 2.0)) - 2f64.sqrt()).abs() < 1e-15);
        let (s0, s1) = d.clip_segment(&Point::<2>::new(-1.0, 0.5), &Point::<2>::new(3.0, 0.5)).unwrap();
        assert!((s0 - 0.25).abs() < 1e-15 && (s1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn disc_clip() {
        let d = Domain::disc(Point::<2>::zeros(), 1.0);
        let (s0, s1) = d.clip_segment(&Point::<2>::new(0.0, 0.0), &Point::<2>::new(2.0, 0.0)).unwrap();
        assert_eq!((s0, s1), (0.0, 0.5));
        assert!(Domain::ConvexPolygon { vertices: vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]] }.validate().is_err());
    }
}
